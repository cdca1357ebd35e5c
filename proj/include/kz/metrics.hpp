#pragma once

#include <span>
#include <string>
#include <vector>

#include "kz/model.hpp"

namespace kz {

/// One publication's contribution to the continuous-impact score.
struct KzBreakdownRow {
    int year = 0;          // publication year
    long citations = 0;    // citations accumulated by evaluation time
    double impact = 0.0;   // k: exponent with (h+1)^k = citations, 0 for counts <= 1
    int age = 1;           // whole years since publication, clamped to >= 1
    double weighted_impact = 0.0; // impact / age

    bool operator==(const KzBreakdownRow&) const = default;
};

enum class CareerZone { early, mid, advanced };

const char* to_string(CareerZone zone);

/// Per-researcher digest of every index this library computes.
struct MetricReport {
    std::string researcher_id;
    long publication_count = 0;
    long total_citations = 0;
    int h_index = 0;
    int g_index = 0;
    int career_length = 0;
    double kz = 0.0;
    /// Score under the printed-table convention: each per-publication addend
    /// rounded to 3 decimals before summing. This is what rendered digests
    /// display, so they agree with the breakdown footers; `kz` stays exact.
    double kz_display = 0.0;
    CareerZone career_zone = CareerZone::early;
    /// Set for profiles with no publications: metrics are all zero and the
    /// report is a placeholder, so cohort runs skip instead of aborting.
    bool empty_profile = false;
};

/// Impact exponent k of a single paper: the smallest non-negative k with
/// citations <= (h+1)^k, i.e. log(citations)/log(h+1) for citations >= 2 and 0
/// for citation counts of 0 or 1. Throws DomainError when citations >= 2 and
/// h == 0 (base-1 logarithm; unreachable for self-consistent profiles).
double paper_impact(long citations, int h);

/// Publication age in whole years, clamped to >= 1 so same-year papers do not
/// divide by zero. Throws ValidationError for future-dated publications.
int publication_age(int publication_year, int evaluation_year);

/// Largest h such that at least h papers have >= h citations each.
int h_index(std::span<const long> citation_counts);

/// Largest g <= N such that the g most-cited papers together have >= g^2
/// citations. Capped at the paper count N.
int g_index(std::span<const long> citation_counts);

/// One row per publication, in input order, using the profile's own h-index.
/// Throws InsufficientDataError for an empty profile.
std::vector<KzBreakdownRow> kz_breakdown(const ResearcherProfile& profile,
                                         const EvaluationContext& ctx);

/// Sum of impact/age over all publications. The addends are accumulated in
/// ascending value order, so the result is independent of publication order.
/// Throws InsufficientDataError for an empty profile.
double kz_score(const ResearcherProfile& profile, const EvaluationContext& ctx);

/// Evaluation year minus the first publication year; >= 0, no clamp.
/// Throws InsufficientDataError for an empty profile.
int career_length(const ResearcherProfile& profile, const EvaluationContext& ctx);

/// Zone cutoffs: early <= 10 < mid <= 20 < advanced.
CareerZone career_zone(int career_length_years);

/// Assembles the full digest. An empty profile yields a flagged all-zero
/// report rather than an error.
MetricReport metric_report(const ResearcherProfile& profile,
                           const EvaluationContext& ctx);

} // namespace kz
