#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kz/errors.hpp"

namespace kz {

/// Publication years below this bound are rejected as typos.
inline constexpr int kMinPublicationYear = 1500;

/// One paper: publication year plus the citations it has accumulated.
struct Publication {
    int year = 0;
    long citations = 0;

    bool operator==(const Publication&) const = default;
};

struct ResearcherProfile {
    std::string id;
    std::vector<Publication> publications;

    bool operator==(const ResearcherProfile&) const = default;

    /// Citation counts in publication order.
    std::vector<long> citation_counts() const;
};

/// The year metrics are evaluated at; publication ages are measured against it.
struct EvaluationContext {
    int evaluation_year = 0;
};

struct ProfileSet {
    std::vector<ResearcherProfile> researchers;
    /// Provenance note (file path or fetch URL); not part of the wire schema.
    std::string source;

    /// Equality is structural over the records; provenance does not count.
    bool operator==(const ProfileSet& other) const {
        return researchers == other.researchers;
    }
};

/// Parses the JSON schema
/// {"researchers":[{"id":string,"publications":[{"year":int,"citations":int}]}]}.
/// Input order is preserved. Years are NOT checked against an evaluation year
/// here; that is validate(). Throws ParseError with a byte position for syntax
/// errors, a field path for schema errors, and the offending id for duplicates.
ProfileSet parse_profiles_json(std::string_view text, std::string source = "");

/// Parses long-format CSV with header exactly `researcher_id,year,citations`,
/// one publication per row, LF or CRLF line endings, RFC-4180 quoting.
/// Rows are grouped by researcher_id in first-appearance order. Errors carry
/// the 1-based line number.
ProfileSet parse_profiles_csv(std::string_view text, std::string source = "");

std::string serialize_profiles_json(const ProfileSet& set);
std::string serialize_profiles_csv(const ProfileSet& set);

/// Checks every publication year against [kMinPublicationYear, evaluation_year]
/// and returns the set unchanged. Profiles with no publications pass (they are
/// flagged later, at the report stage). Idempotent.
ProfileSet validate(ProfileSet set, const EvaluationContext& ctx);

} // namespace kz
