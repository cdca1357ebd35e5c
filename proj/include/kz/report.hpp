#pragma once

#include <span>
#include <string>
#include <vector>

#include "kz/metrics.hpp"
#include "kz/stats.hpp"

namespace kz {

enum class OutputFormat { csv, json, text };

struct RenderOptions {
    OutputFormat format = OutputFormat::text;
    int decimals = 4;     // impact column precision
    int kz_decimals = 3;  // weighted-impact column and score totals
    bool sort_by_kz = true; // render_reports: stable sort by kz desc, id asc
    int evaluation_year = 0; // echoed in the document header when non-zero
    std::string label;       // free-form context line, omitted when empty
};

/// Fixed-point decimal formatting, half away from zero, locale-independent.
/// decimals must be in [0, 12].
std::string format_fixed(double value, int decimals);

/// Rounds to the given number of decimals, half away from zero.
double round_half_away(double value, int decimals);

/// Cohort table with columns id, career_length, publications,
/// total_citations, h_index, g_index, kz (plus a flags column carrying the
/// empty-profile marker). Deterministic; CSV output parses back with
/// parse_reports_csv.
std::string render_reports(std::span<const MetricReport> reports,
                           const RenderOptions& opts);

/// Inverse of render_reports for the CSV and JSON formats (used to feed a
/// rendered cohort back into ranking). Career zone is derived from length.
std::vector<MetricReport> parse_reports_csv(std::string_view text);
std::vector<MetricReport> parse_reports_json(std::string_view text);

/// Per-publication table with columns year, citations, impact, age,
/// weighted_impact and a footer line "TC = <total citations>, Kz = <total>".
/// The footer total is the sum of the rounded weighted-impact column, so the
/// printed table is self-consistent.
std::string render_breakdown(std::span<const KzBreakdownRow> rows,
                             const RenderOptions& opts);

struct ScatterPoint {
    double career_length = 0.0;
    double kz = 0.0;
    std::string id;
};

/// Career-length scatter input. Zone cuts are fixed at 10 and 20 years; the
/// median line is computed over the plotted kz values.
struct ScatterSpec {
    std::vector<ScatterPoint> points;
    bool log_y = false;
    int evaluation_year = 0; // echoed as an XML comment when non-zero

    static constexpr double zone_cuts[2] = {10.0, 20.0};
};

/// Scatter of kz versus career length: one circle per point, dashed zone cut
/// lines at x = 10 and x = 20, dashed horizontal median line, labeled axes.
/// Byte-deterministic for fixed input. Throws DomainError on an empty point set.
std::string render_scatter_svg(const ScatterSpec& spec);

struct HistogramBins {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<long> counts;
};

/// Equal-width bins over [min, max] of the values; the last bin is closed.
HistogramBins histogram_bins(std::span<const double> values, int bins);

/// Density histogram of log(score) overlaid with the normal density for
/// (stats.mu, stats.sigma). Requires bins >= 3 and stats.sigma > 0.
/// Byte-deterministic for fixed input.
std::string render_histogram_svg(std::span<const double> scores,
                                 const LogKzStats& stats, int bins,
                                 int evaluation_year = 0);

} // namespace kz
