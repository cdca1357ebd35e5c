#include "kz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kz {

const char* to_string(CareerZone zone) {
    switch (zone) {
        case CareerZone::early: return "early";
        case CareerZone::mid: return "mid";
        case CareerZone::advanced: return "advanced";
    }
    return "early";
}

double paper_impact(long citations, int h) {
    if (citations < 0) {
        throw DomainError("citations must be non-negative: " + std::to_string(citations));
    }
    if (h < 0) {
        throw DomainError("h-index must be non-negative: " + std::to_string(h));
    }
    if (citations <= 1) return 0.0;
    if (h == 0) {
        throw DomainError("impact undefined for " + std::to_string(citations) +
                          " citations with h = 0 (any cited paper forces h >= 1)");
    }
    return std::log(static_cast<double>(citations)) / std::log(static_cast<double>(h) + 1.0);
}

int publication_age(int publication_year, int evaluation_year) {
    if (publication_year > evaluation_year) {
        throw ValidationError("future-dated publication: year " +
                              std::to_string(publication_year) + " after evaluation year " +
                              std::to_string(evaluation_year));
    }
    return std::max(1, evaluation_year - publication_year);
}

int h_index(std::span<const long> citation_counts) {
    std::vector<long> sorted(citation_counts.begin(), citation_counts.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= static_cast<long>(i) + 1) h = static_cast<int>(i) + 1;
        else break;
    }
    return h;
}

int g_index(std::span<const long> citation_counts) {
    std::vector<long> sorted(citation_counts.begin(), citation_counts.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int g = 0;
    long running = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        running += sorted[i];
        const long rank = static_cast<long>(i) + 1;
        if (running >= rank * rank) g = static_cast<int>(rank);
    }
    return g;
}

std::vector<KzBreakdownRow> kz_breakdown(const ResearcherProfile& profile,
                                         const EvaluationContext& ctx) {
    if (profile.publications.empty()) {
        throw InsufficientDataError("researcher \"" + profile.id +
                                    "\" has no publications (N > 0 required)");
    }
    const auto counts = profile.citation_counts();
    const int h = h_index(counts);

    std::vector<KzBreakdownRow> rows;
    rows.reserve(profile.publications.size());
    for (const auto& pub : profile.publications) {
        KzBreakdownRow row;
        row.year = pub.year;
        row.citations = pub.citations;
        row.impact = paper_impact(pub.citations, h);
        row.age = publication_age(pub.year, ctx.evaluation_year);
        row.weighted_impact = row.impact / row.age;
        rows.push_back(row);
    }
    return rows;
}

double kz_score(const ResearcherProfile& profile, const EvaluationContext& ctx) {
    const auto rows = kz_breakdown(profile, ctx);
    std::vector<double> addends;
    addends.reserve(rows.size());
    for (const auto& row : rows) addends.push_back(row.weighted_impact);
    // Ascending-order accumulation makes the sum independent of publication order.
    std::sort(addends.begin(), addends.end());
    return std::accumulate(addends.begin(), addends.end(), 0.0);
}

int career_length(const ResearcherProfile& profile, const EvaluationContext& ctx) {
    if (profile.publications.empty()) {
        throw InsufficientDataError("researcher \"" + profile.id +
                                    "\" has no publications (N > 0 required)");
    }
    int first_year = profile.publications.front().year;
    for (const auto& pub : profile.publications) first_year = std::min(first_year, pub.year);
    if (first_year > ctx.evaluation_year) {
        throw ValidationError("future-dated publication: year " + std::to_string(first_year) +
                              " after evaluation year " + std::to_string(ctx.evaluation_year));
    }
    return ctx.evaluation_year - first_year;
}

CareerZone career_zone(int career_length_years) {
    if (career_length_years <= 10) return CareerZone::early;
    if (career_length_years <= 20) return CareerZone::mid;
    return CareerZone::advanced;
}

MetricReport metric_report(const ResearcherProfile& profile, const EvaluationContext& ctx) {
    MetricReport report;
    report.researcher_id = profile.id;
    if (profile.publications.empty()) {
        report.empty_profile = true;
        return report;
    }
    const auto counts = profile.citation_counts();
    report.publication_count = static_cast<long>(profile.publications.size());
    report.total_citations = std::accumulate(counts.begin(), counts.end(), 0L);
    report.h_index = h_index(counts);
    report.g_index = g_index(counts);
    report.career_length = career_length(profile, ctx);
    report.kz = kz_score(profile, ctx);
    for (const auto& row : kz_breakdown(profile, ctx)) {
        report.kz_display +=
            static_cast<double>(std::llround(row.weighted_impact * 1000.0)) / 1000.0;
    }
    report.career_zone = career_zone(report.career_length);
    return report;
}

} // namespace kz
