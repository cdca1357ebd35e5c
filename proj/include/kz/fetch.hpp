#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kz/model.hpp"

namespace kz {

/// Client configuration for an OpenAlex-compatible works API.
struct FetchConfig {
    std::string base_url = "https://api.openalex.org";
    std::string author_id;
    int page_size = 200;          // works per page, in [1, 200]
    std::string polite_email;     // appended as mailto= per API etiquette
    double timeout_seconds = 30.0;
    int request_delay_ms = 100;   // courtesy pause between page requests
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Transport: takes a path-plus-query relative to base_url, returns the
/// response. Throwing TransportError (or returning status 0) aborts the fetch.
using HttpGet = std::function<HttpResponse(const std::string& path_and_query)>;

/// Maps one works-list page to publications: publication_year becomes the
/// year, cited_by_count the citation count. Works without a publication year
/// and works with a missing or negative citation count are schema errors
/// naming the work.
std::vector<Publication> map_works_payload(const nlohmann::json& payload);

/// Pages through /works?filter=author.id:<id> with cursor pagination and
/// assembles a profile, ordered by (year, citations, work id). HTTP 404 is
/// reported as an unknown-author TransportError; any other non-200 status or
/// a mid-pagination failure aborts with the pages fetched so far named in the
/// message.
ResearcherProfile fetch_author_profile(const FetchConfig& cfg, const HttpGet& get);

/// Same, over a real HTTP client built from cfg.base_url.
ResearcherProfile fetch_author_profile(const FetchConfig& cfg);

} // namespace kz
