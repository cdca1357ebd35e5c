#include "kz/model.hpp"

#include <charconv>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "csv_util.hpp"

namespace kz {

namespace {

using detail::csv_quote;
using detail::scan_csv;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

long require_int(const json& node, const std::string& path, long min_value,
                 const char* min_message) {
    if (!node.is_number_integer()) {
        throw ParseError("expected integer at " + path);
    }
    const long value = node.get<long>();
    if (value < min_value) {
        throw ParseError(std::string(min_message) + " at " + path + ": " +
                         std::to_string(value));
    }
    return value;
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError("missing required field " + path + "/" + key);
    }
    return *it;
}

long parse_long_field(const std::string& field, std::size_t line, const char* name) {
    long value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw ParseError("line " + std::to_string(line) + ": " + name +
                         " is not an integer: \"" + field + "\"");
    }
    return value;
}

} // namespace

std::vector<long> ResearcherProfile::citation_counts() const {
    std::vector<long> counts;
    counts.reserve(publications.size());
    for (const auto& pub : publications) counts.push_back(pub.citations);
    return counts;
}

ProfileSet parse_profiles_json(std::string_view text, std::string source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }

    if (!doc.is_object()) {
        throw ParseError("expected top-level object");
    }
    const json& researchers = require_field(doc, "researchers", "");
    if (!researchers.is_array()) {
        throw ParseError("expected array at /researchers");
    }

    ProfileSet set;
    set.source = std::move(source);
    std::unordered_set<std::string> seen_ids;
    for (std::size_t i = 0; i < researchers.size(); ++i) {
        const std::string rpath = "/researchers/" + std::to_string(i);
        const json& entry = researchers[i];
        if (!entry.is_object()) {
            throw ParseError("expected object at " + rpath);
        }
        ResearcherProfile profile;
        const json& id = require_field(entry, "id", rpath);
        if (!id.is_string() || id.get<std::string>().empty()) {
            throw ParseError("expected non-empty string at " + rpath + "/id");
        }
        profile.id = id.get<std::string>();
        if (!seen_ids.insert(profile.id).second) {
            throw ParseError("duplicate researcher id \"" + profile.id + "\"");
        }

        const json& pubs = require_field(entry, "publications", rpath);
        if (!pubs.is_array()) {
            throw ParseError("expected array at " + rpath + "/publications");
        }
        for (std::size_t j = 0; j < pubs.size(); ++j) {
            const std::string ppath = rpath + "/publications/" + std::to_string(j);
            const json& pub = pubs[j];
            if (!pub.is_object()) {
                throw ParseError("expected object at " + ppath);
            }
            Publication publication;
            publication.year = static_cast<int>(require_int(
                require_field(pub, "year", ppath), ppath + "/year",
                std::numeric_limits<long>::min(), ""));
            publication.citations =
                require_int(require_field(pub, "citations", ppath),
                            ppath + "/citations", 0, "citations must be non-negative");
            profile.publications.push_back(publication);
        }
        set.researchers.push_back(std::move(profile));
    }
    return set;
}

ProfileSet parse_profiles_csv(std::string_view text, std::string source) {
    const auto records = scan_csv(text);
    if (records.empty()) {
        throw ParseError("missing header; expected \"researcher_id,year,citations\"");
    }
    const auto& header = records.front().fields;
    if (header.size() != 3 || header[0] != "researcher_id" || header[1] != "year" ||
        header[2] != "citations") {
        throw ParseError("bad header; expected \"researcher_id,year,citations\"");
    }

    ProfileSet set;
    set.source = std::move(source);
    std::unordered_map<std::string, std::size_t> index_by_id;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.fields.size() != 3) {
            throw ParseError("line " + std::to_string(record.line) + ": expected 3 fields, got " +
                             std::to_string(record.fields.size()));
        }
        const std::string& id = record.fields[0];
        if (id.empty()) {
            throw ParseError("line " + std::to_string(record.line) + ": empty researcher_id");
        }
        Publication pub;
        pub.year = static_cast<int>(parse_long_field(record.fields[1], record.line, "year"));
        pub.citations = parse_long_field(record.fields[2], record.line, "citations");
        if (pub.citations < 0) {
            throw ParseError("line " + std::to_string(record.line) +
                             ": citations must be non-negative: " +
                             std::to_string(pub.citations));
        }

        auto [it, inserted] = index_by_id.emplace(id, set.researchers.size());
        if (inserted) {
            set.researchers.push_back(ResearcherProfile{id, {}});
        }
        set.researchers[it->second].publications.push_back(pub);
    }
    return set;
}

std::string serialize_profiles_json(const ProfileSet& set) {
    ordered_json researchers = ordered_json::array();
    for (const auto& profile : set.researchers) {
        ordered_json pubs = ordered_json::array();
        for (const auto& pub : profile.publications) {
            pubs.push_back({{"year", pub.year}, {"citations", pub.citations}});
        }
        researchers.push_back({{"id", profile.id}, {"publications", std::move(pubs)}});
    }
    ordered_json doc{{"researchers", std::move(researchers)}};
    return doc.dump(2) + "\n";
}

std::string serialize_profiles_csv(const ProfileSet& set) {
    std::string out = "researcher_id,year,citations\n";
    for (const auto& profile : set.researchers) {
        for (const auto& pub : profile.publications) {
            out += csv_quote(profile.id);
            out += ',';
            out += std::to_string(pub.year);
            out += ',';
            out += std::to_string(pub.citations);
            out += '\n';
        }
    }
    return out;
}

ProfileSet validate(ProfileSet set, const EvaluationContext& ctx) {
    for (const auto& profile : set.researchers) {
        for (const auto& pub : profile.publications) {
            if (pub.year > ctx.evaluation_year) {
                throw ValidationError("future-dated publication: researcher \"" + profile.id +
                                      "\" has year " + std::to_string(pub.year) +
                                      " after evaluation year " +
                                      std::to_string(ctx.evaluation_year));
            }
            if (pub.year < kMinPublicationYear) {
                throw ValidationError("publication year out of range: researcher \"" +
                                      profile.id + "\" has year " + std::to_string(pub.year) +
                                      " before " + std::to_string(kMinPublicationYear));
            }
        }
    }
    return set;
}

} // namespace kz
