#include "kz/fetch.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <thread>
#include <tuple>

namespace kz {

namespace {

using nlohmann::json;

// Values going into query parameters (author ids, cursors, emails).
std::string percent_encode(const std::string& value) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(value.size());
    for (unsigned char c : value) {
        const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                                (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
                                c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0x0f]);
        }
    }
    return out;
}

std::string work_name(const json& work, std::size_t index) {
    if (work.is_object() && work.contains("id") && work["id"].is_string()) {
        return work["id"].get<std::string>();
    }
    return "work #" + std::to_string(index);
}

} // namespace

std::vector<Publication> map_works_payload(const json& payload) {
    if (!payload.is_object() || !payload.contains("results") || !payload["results"].is_array()) {
        throw ParseError("works payload has no \"results\" array");
    }
    const json& results = payload["results"];
    std::vector<Publication> publications;
    publications.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        const json& work = results[i];
        if (!work.is_object()) {
            throw ParseError("works payload entry " + std::to_string(i) + " is not an object");
        }
        const auto year_it = work.find("publication_year");
        if (year_it == work.end() || year_it->is_null()) {
            // Works without a year cannot be aged; reject rather than guess.
            throw ParseError("work " + work_name(work, i) + " has no publication year");
        }
        if (!year_it->is_number_integer()) {
            throw ParseError("work " + work_name(work, i) + " has a non-integer publication year");
        }
        const auto cited_it = work.find("cited_by_count");
        if (cited_it == work.end() || !cited_it->is_number_integer()) {
            throw ParseError("work " + work_name(work, i) + " has no citation count");
        }
        const long citations = cited_it->get<long>();
        if (citations < 0) {
            throw ParseError("work " + work_name(work, i) + " has a negative citation count");
        }
        publications.push_back(Publication{year_it->get<int>(), citations});
    }
    return publications;
}

ResearcherProfile fetch_author_profile(const FetchConfig& cfg, const HttpGet& get) {
    if (cfg.author_id.empty()) {
        throw DomainError("author id must be non-empty");
    }
    if (cfg.page_size < 1 || cfg.page_size > 200) {
        throw DomainError("page size must be in [1, 200], got " + std::to_string(cfg.page_size));
    }

    std::vector<std::tuple<int, long, std::string>> works; // (year, citations, work id)
    std::string cursor = "*";
    int pages = 0;
    constexpr int kMaxPages = 10000;

    while (true) {
        if (pages > 0 && cfg.request_delay_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.request_delay_ms));
        }
        std::string path = "/works?filter=author.id:" + percent_encode(cfg.author_id) +
                           "&per-page=" + std::to_string(cfg.page_size) +
                           "&cursor=" + percent_encode(cursor);
        if (!cfg.polite_email.empty()) {
            path += "&mailto=" + percent_encode(cfg.polite_email);
        }

        const HttpResponse response = get(path);
        if (response.status == 404) {
            throw TransportError("author \"" + cfg.author_id + "\" not found (HTTP 404)", 404);
        }
        if (response.status != 200) {
            throw TransportError("works request failed with HTTP " +
                                     std::to_string(response.status) + " after " +
                                     std::to_string(pages) + " page(s)",
                                 response.status);
        }

        json payload;
        try {
            payload = json::parse(response.body);
        } catch (const json::parse_error& e) {
            throw ParseError("malformed works payload on page " + std::to_string(pages + 1) +
                             ": " + e.what());
        }

        const auto page_publications = map_works_payload(payload);
        const json& results = payload["results"];
        for (std::size_t i = 0; i < page_publications.size(); ++i) {
            works.emplace_back(page_publications[i].year, page_publications[i].citations,
                               work_name(results[i], i));
        }
        ++pages;

        if (page_publications.empty()) break;
        const json meta = payload.value("meta", json::object());
        if (!meta.contains("next_cursor") || meta["next_cursor"].is_null() ||
            !meta["next_cursor"].is_string() || meta["next_cursor"].get<std::string>().empty()) {
            break;
        }
        cursor = meta["next_cursor"].get<std::string>();
        if (pages >= kMaxPages) {
            throw TransportError("pagination did not terminate after " + std::to_string(pages) +
                                 " pages");
        }
    }

    std::sort(works.begin(), works.end());
    ResearcherProfile profile;
    profile.id = cfg.author_id;
    profile.publications.reserve(works.size());
    for (const auto& [year, citations, id] : works) {
        profile.publications.push_back(Publication{year, citations});
    }
    return profile;
}

ResearcherProfile fetch_author_profile(const FetchConfig& cfg) {
    httplib::Client client(cfg.base_url);
    const auto timeout_ms =
        std::chrono::milliseconds(static_cast<long>(cfg.timeout_seconds * 1000.0));
    client.set_connection_timeout(timeout_ms);
    client.set_read_timeout(timeout_ms);
    client.set_write_timeout(timeout_ms);
    client.set_follow_location(true);

    const HttpGet transport = [&client](const std::string& path) -> HttpResponse {
        auto result = client.Get(path);
        if (!result) {
            throw TransportError("transport failure: " + httplib::to_string(result.error()));
        }
        return HttpResponse{result->status, result->body};
    };
    return fetch_author_profile(cfg, transport);
}

} // namespace kz
