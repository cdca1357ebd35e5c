#include "kz/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "csv_util.hpp"

namespace kz {

namespace {

using detail::csv_quote;
using detail::scan_csv;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kReportCsvHeader =
    "id,career_length,publications,total_citations,h_index,g_index,kz,flags";

double pow10_int(int exponent) {
    double value = 1.0;
    for (int i = 0; i < exponent; ++i) value *= 10.0;
    return value;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void rtrim(std::string& s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
}

// "# evaluation_year: .." / "# .." preamble shared by the textual formats.
std::string preamble(const RenderOptions& opts) {
    std::string head;
    if (opts.evaluation_year != 0) {
        head += "# evaluation_year: " + std::to_string(opts.evaluation_year) + "\n";
    }
    if (!opts.label.empty()) {
        head += "# " + opts.label + "\n";
    }
    return head;
}

std::vector<MetricReport> sorted_for_render(std::span<const MetricReport> reports,
                                            const RenderOptions& opts) {
    std::vector<MetricReport> rows(reports.begin(), reports.end());
    if (opts.sort_by_kz) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const MetricReport& a, const MetricReport& b) {
                             if (a.kz != b.kz) return a.kz > b.kz;
                             return a.researcher_id < b.researcher_id;
                         });
    }
    return rows;
}

double parse_double_field(const std::string& field, std::size_t line, const char* name) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw ParseError("line " + std::to_string(line) + ": " + name +
                         " is not a number: \"" + field + "\"");
    }
    return value;
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

MetricReport report_from_fields(const std::string& id, long career, long pubs, long cites,
                                long h, long g, double kz, const std::string& flags) {
    MetricReport report;
    report.researcher_id = id;
    report.career_length = static_cast<int>(career);
    report.publication_count = pubs;
    report.total_citations = cites;
    report.h_index = static_cast<int>(h);
    report.g_index = static_cast<int>(g);
    report.kz = kz;
    report.kz_display = kz;
    report.career_zone = career_zone(report.career_length);
    report.empty_profile = flags == "empty";
    return report;
}

} // namespace

double round_half_away(double value, int decimals) {
    const double scale = pow10_int(decimals);
    if (!std::isfinite(value) || std::fabs(value) >= 9e17 / scale) return value;
    return static_cast<double>(std::llround(value * scale)) / scale;
}

std::string format_fixed(double value, int decimals) {
    if (decimals < 0 || decimals > 12) {
        throw DomainError("decimals must be in [0, 12], got " + std::to_string(decimals));
    }
    const double scale = pow10_int(decimals);
    if (!std::isfinite(value) || std::fabs(value) >= 9e17 / scale) {
        // Out of integer-rendering range; fall back to the library formatter.
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
        return std::string(buf, res.ptr);
    }
    long long scaled = std::llround(value * scale);
    const bool negative = scaled < 0;
    std::string digits = std::to_string(negative ? -scaled : scaled);
    if (digits.size() < static_cast<std::size_t>(decimals) + 1) {
        digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    std::string out;
    if (negative) out.push_back('-');
    out.append(digits, 0, digits.size() - decimals);
    if (decimals > 0) {
        out.push_back('.');
        out.append(digits, digits.size() - decimals, static_cast<std::size_t>(decimals));
    }
    return out;
}

std::string render_reports(std::span<const MetricReport> reports, const RenderOptions& opts) {
    const auto rows = sorted_for_render(reports, opts);

    if (opts.format == OutputFormat::json) {
        ordered_json doc;
        if (opts.evaluation_year != 0) doc["evaluation_year"] = opts.evaluation_year;
        if (!opts.label.empty()) doc["label"] = opts.label;
        ordered_json items = ordered_json::array();
        for (const auto& r : rows) {
            items.push_back({{"id", r.researcher_id},
                             {"career_length", r.career_length},
                             {"publications", r.publication_count},
                             {"total_citations", r.total_citations},
                             {"h_index", r.h_index},
                             {"g_index", r.g_index},
                             {"kz", round_half_away(r.kz_display, opts.kz_decimals)},
                             {"career_zone", to_string(r.career_zone)},
                             {"flags", r.empty_profile ? "empty" : ""}});
        }
        doc["reports"] = std::move(items);
        return doc.dump(2) + "\n";
    }

    if (opts.format == OutputFormat::csv) {
        std::string out = preamble(opts);
        out += kReportCsvHeader;
        out += '\n';
        for (const auto& r : rows) {
            out += csv_quote(r.researcher_id);
            out += ',' + std::to_string(r.career_length);
            out += ',' + std::to_string(r.publication_count);
            out += ',' + std::to_string(r.total_citations);
            out += ',' + std::to_string(r.h_index);
            out += ',' + std::to_string(r.g_index);
            out += ',' + format_fixed(r.kz_display, opts.kz_decimals);
            out += ',';
            if (r.empty_profile) out += "empty";
            out += '\n';
        }
        return out;
    }

    // Aligned text.
    std::vector<std::array<std::string, 8>> cells;
    cells.push_back({"id", "career_length", "publications", "total_citations", "h_index",
                     "g_index", "kz", "flags"});
    for (const auto& r : rows) {
        cells.push_back({r.researcher_id, std::to_string(r.career_length),
                         std::to_string(r.publication_count), std::to_string(r.total_citations),
                         std::to_string(r.h_index), std::to_string(r.g_index),
                         format_fixed(r.kz_display, opts.kz_decimals),
                         r.empty_profile ? std::string("empty") : std::string()});
    }
    std::array<std::size_t, 8> widths{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out = preamble(opts);
    for (std::size_t r = 0; r < cells.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            if (c > 0) line += "  ";
            // id and flags left-aligned, numbers right-aligned.
            if (c == 0 || c == 7) line += pad_right(cells[r][c], widths[c]);
            else line += pad_left(cells[r][c], widths[c]);
        }
        rtrim(line);
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<MetricReport> parse_reports_csv(std::string_view text) {
    // Drop comment lines before scanning.
    std::string filtered;
    filtered.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        else ++eol;
        std::string_view line = text.substr(pos, eol - pos);
        if (line.empty() || line[0] != '#') filtered.append(line);
        pos = eol;
    }

    const auto records = scan_csv(filtered);
    if (records.empty() || records.front().fields.size() != 8) {
        throw ParseError("bad header; expected \"" + std::string(kReportCsvHeader) + "\"");
    }
    {
        std::string joined;
        for (std::size_t i = 0; i < records.front().fields.size(); ++i) {
            if (i > 0) joined += ',';
            joined += records.front().fields[i];
        }
        if (joined != kReportCsvHeader) {
            throw ParseError("bad header; expected \"" + std::string(kReportCsvHeader) + "\"");
        }
    }

    std::vector<MetricReport> reports;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != 8) {
            throw ParseError("line " + std::to_string(rec.line) + ": expected 8 fields, got " +
                             std::to_string(rec.fields.size()));
        }
        reports.push_back(report_from_fields(
            rec.fields[0], parse_long_field(rec.fields[1], rec.line, "career_length"),
            parse_long_field(rec.fields[2], rec.line, "publications"),
            parse_long_field(rec.fields[3], rec.line, "total_citations"),
            parse_long_field(rec.fields[4], rec.line, "h_index"),
            parse_long_field(rec.fields[5], rec.line, "g_index"),
            parse_double_field(rec.fields[6], rec.line, "kz"), rec.fields[7]));
    }
    return reports;
}

std::vector<MetricReport> parse_reports_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("reports") || !doc["reports"].is_array()) {
        throw ParseError("expected object with a \"reports\" array");
    }
    std::vector<MetricReport> reports;
    for (const auto& item : doc["reports"]) {
        if (!item.is_object()) throw ParseError("expected report objects in \"reports\"");
        try {
            reports.push_back(report_from_fields(
                item.at("id").get<std::string>(), item.at("career_length").get<long>(),
                item.at("publications").get<long>(), item.at("total_citations").get<long>(),
                item.at("h_index").get<long>(), item.at("g_index").get<long>(),
                item.at("kz").get<double>(), item.value("flags", "")));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad report entry: ") + e.what());
        }
    }
    return reports;
}

std::string render_breakdown(std::span<const KzBreakdownRow> rows, const RenderOptions& opts) {
    long total_citations = 0;
    double kz_total = 0.0; // sum of the rounded column, so the footer matches the rows
    for (const auto& row : rows) {
        total_citations += row.citations;
        kz_total += round_half_away(row.weighted_impact, opts.kz_decimals);
    }
    const std::string footer = "TC = " + std::to_string(total_citations) +
                               ", Kz = " + format_fixed(kz_total, opts.kz_decimals);

    if (opts.format == OutputFormat::json) {
        ordered_json doc;
        if (opts.evaluation_year != 0) doc["evaluation_year"] = opts.evaluation_year;
        if (!opts.label.empty()) doc["label"] = opts.label;
        ordered_json items = ordered_json::array();
        for (const auto& row : rows) {
            items.push_back({{"year", row.year},
                             {"citations", row.citations},
                             {"impact", round_half_away(row.impact, opts.decimals)},
                             {"age", row.age},
                             {"weighted_impact",
                              round_half_away(row.weighted_impact, opts.kz_decimals)}});
        }
        doc["rows"] = std::move(items);
        doc["total_citations"] = total_citations;
        doc["kz"] = round_half_away(kz_total, opts.kz_decimals);
        return doc.dump(2) + "\n";
    }

    if (opts.format == OutputFormat::csv) {
        std::string out = preamble(opts);
        out += "year,citations,impact,age,weighted_impact\n";
        for (const auto& row : rows) {
            out += std::to_string(row.year);
            out += ',' + std::to_string(row.citations);
            out += ',' + format_fixed(row.impact, opts.decimals);
            out += ',' + std::to_string(row.age);
            out += ',' + format_fixed(row.weighted_impact, opts.kz_decimals);
            out += '\n';
        }
        out += "# " + footer + "\n";
        return out;
    }

    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"year", "citations", "impact", "age", "weighted_impact"});
    for (const auto& row : rows) {
        cells.push_back({std::to_string(row.year), std::to_string(row.citations),
                         format_fixed(row.impact, opts.decimals), std::to_string(row.age),
                         format_fixed(row.weighted_impact, opts.kz_decimals)});
    }
    std::array<std::size_t, 5> widths{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out = preamble(opts);
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) line += "  ";
            line += pad_left(row[c], widths[c]);
        }
        rtrim(line);
        out += line;
        out += '\n';
    }
    out += footer;
    out += '\n';
    return out;
}

namespace {

// Shared plot geometry: SVG y grows downward.
struct PlotFrame {
    double width = 720.0, height = 480.0;
    double left = 64.0, right = 700.0, top = 20.0, bottom = 432.0;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

    double px(double x) const {
        return left + (x - x_min) / (x_max - x_min) * (right - left);
    }
    double py(double y) const {
        return bottom - (y - y_min) / (y_max - y_min) * (bottom - top);
    }
};

std::string svg_open(const PlotFrame& frame, int evaluation_year) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           format_fixed(frame.width, 0) + "\" height=\"" + format_fixed(frame.height, 0) +
           "\" viewBox=\"0 0 " + format_fixed(frame.width, 0) + " " +
           format_fixed(frame.height, 0) + "\">\n";
    if (evaluation_year != 0) {
        out += "<!-- evaluation_year: " + std::to_string(evaluation_year) + " -->\n";
    }
    out += "<rect x=\"0\" y=\"0\" width=\"" + format_fixed(frame.width, 0) + "\" height=\"" +
           format_fixed(frame.height, 0) + "\" fill=\"#ffffff\"/>\n";
    return out;
}

std::string svg_line(double x1, double y1, double x2, double y2, const std::string& attrs) {
    return "<line x1=\"" + format_fixed(x1, 2) + "\" y1=\"" + format_fixed(y1, 2) +
           "\" x2=\"" + format_fixed(x2, 2) + "\" y2=\"" + format_fixed(y2, 2) + "\" " + attrs +
           "/>\n";
}

std::string svg_text(double x, double y, const std::string& anchor, const std::string& body,
                     const std::string& extra = "") {
    return "<text x=\"" + format_fixed(x, 2) + "\" y=\"" + format_fixed(y, 2) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"" + anchor + "\"" +
           (extra.empty() ? "" : " " + extra) + ">" + body + "</text>\n";
}

std::string svg_axes(const PlotFrame& frame, const std::string& x_title,
                     const std::string& y_title) {
    std::string out;
    const std::string axis_attrs = "stroke=\"#000000\" stroke-width=\"1\"";
    out += svg_line(frame.left, frame.bottom, frame.right, frame.bottom, axis_attrs);
    out += svg_line(frame.left, frame.top, frame.left, frame.bottom, axis_attrs);
    out += svg_text((frame.left + frame.right) / 2.0, frame.bottom + 36.0, "middle", x_title);
    out += svg_text(16.0, (frame.top + frame.bottom) / 2.0, "middle", y_title,
                    "transform=\"rotate(-90 16 " +
                        format_fixed((frame.top + frame.bottom) / 2.0, 2) + ")\"");
    return out;
}

std::string svg_x_tick(const PlotFrame& frame, double x, const std::string& label) {
    std::string out = svg_line(frame.px(x), frame.bottom, frame.px(x), frame.bottom + 5.0,
                               "stroke=\"#000000\" stroke-width=\"1\"");
    out += svg_text(frame.px(x), frame.bottom + 18.0, "middle", label);
    return out;
}

std::string svg_y_tick(const PlotFrame& frame, double y, const std::string& label) {
    std::string out = svg_line(frame.left - 5.0, frame.py(y), frame.left, frame.py(y),
                               "stroke=\"#000000\" stroke-width=\"1\"");
    out += svg_text(frame.left - 8.0, frame.py(y) + 4.0, "end", label);
    return out;
}

} // namespace

std::string render_scatter_svg(const ScatterSpec& spec) {
    if (spec.points.empty()) {
        throw DomainError("scatter plot requires at least one point");
    }

    double max_career = 0.0;
    double max_kz = 0.0;
    double min_positive_kz = 0.0;
    std::vector<double> kz_values;
    kz_values.reserve(spec.points.size());
    for (const auto& point : spec.points) {
        max_career = std::max(max_career, point.career_length);
        max_kz = std::max(max_kz, point.kz);
        if (point.kz > 0.0 && (min_positive_kz == 0.0 || point.kz < min_positive_kz)) {
            min_positive_kz = point.kz;
        }
        kz_values.push_back(point.kz);
    }

    PlotFrame frame;
    frame.x_min = 0.0;
    frame.x_max = std::max(25.0, max_career * 1.05);

    double log_lo = 0.0, log_hi = 1.0;
    if (spec.log_y) {
        if (min_positive_kz <= 0.0) {
            throw DomainError("log scale requires at least one positive score");
        }
        log_lo = std::floor(std::log10(min_positive_kz));
        log_hi = std::ceil(std::log10(std::max(max_kz, min_positive_kz)));
        if (log_hi <= log_lo) log_hi = log_lo + 1.0;
        frame.y_min = log_lo;
        frame.y_max = log_hi;
    } else {
        frame.y_min = 0.0;
        frame.y_max = max_kz > 0.0 ? max_kz * 1.08 : 1.0;
    }
    const auto y_of = [&](double kz_value) {
        if (!spec.log_y) return kz_value;
        // Non-positive scores sit on the floor of the log axis.
        return kz_value > 0.0 ? std::log10(kz_value) : log_lo;
    };

    std::sort(kz_values.begin(), kz_values.end());
    const std::size_t n = kz_values.size();
    const double median = n % 2 == 1 ? kz_values[n / 2]
                                     : 0.5 * (kz_values[n / 2 - 1] + kz_values[n / 2]);

    std::string out = svg_open(frame, spec.evaluation_year);

    // Zone bands: early / mid / advanced.
    const double cut1 = ScatterSpec::zone_cuts[0];
    const double cut2 = ScatterSpec::zone_cuts[1];
    const char* band_fills[3] = {"#f2f7f2", "#f2f4fa", "#faf4f0"};
    const double band_edges[4] = {frame.x_min, cut1, cut2, frame.x_max};
    for (int band = 0; band < 3; ++band) {
        out += "<rect x=\"" + format_fixed(frame.px(band_edges[band]), 2) + "\" y=\"" +
               format_fixed(frame.top, 2) + "\" width=\"" +
               format_fixed(frame.px(band_edges[band + 1]) - frame.px(band_edges[band]), 2) +
               "\" height=\"" + format_fixed(frame.bottom - frame.top, 2) + "\" fill=\"" +
               band_fills[band] + "\"/>\n";
    }

    out += svg_axes(frame, "career length (years)", "kz");
    out += svg_x_tick(frame, 0.0, "0");
    out += svg_x_tick(frame, cut1, "10");
    out += svg_x_tick(frame, cut2, "20");
    out += svg_x_tick(frame, frame.x_max, format_fixed(frame.x_max, 0));
    for (int i = 0; i <= 4; ++i) {
        const double y = frame.y_min + (frame.y_max - frame.y_min) * i / 4.0;
        const double label_value = spec.log_y ? std::pow(10.0, y) : y;
        out += svg_y_tick(frame, y, format_fixed(label_value, 2));
    }

    const std::string dashed = "stroke-dasharray=\"6 4\" stroke-width=\"1\"";
    out += svg_line(frame.px(cut1), frame.top, frame.px(cut1), frame.bottom,
                    "class=\"zone-cut\" stroke=\"#777777\" " + dashed);
    out += svg_line(frame.px(cut2), frame.top, frame.px(cut2), frame.bottom,
                    "class=\"zone-cut\" stroke=\"#777777\" " + dashed);
    out += svg_line(frame.left, frame.py(y_of(median)), frame.right, frame.py(y_of(median)),
                    "class=\"median\" stroke=\"#b03a2e\" " + dashed);

    for (const auto& point : spec.points) {
        out += "<circle class=\"point\" cx=\"" + format_fixed(frame.px(point.career_length), 2) +
               "\" cy=\"" + format_fixed(frame.py(y_of(point.kz)), 2) +
               "\" r=\"3\" fill=\"#34679a\"/>\n";
    }

    out += "</svg>\n";
    return out;
}

HistogramBins histogram_bins(std::span<const double> values, int bins) {
    if (bins < 1) {
        throw DomainError("bins must be >= 1, got " + std::to_string(bins));
    }
    if (values.empty()) {
        throw DomainError("histogram requires at least one value");
    }
    HistogramBins result;
    result.lo = *std::min_element(values.begin(), values.end());
    result.hi = *std::max_element(values.begin(), values.end());
    result.counts.assign(static_cast<std::size_t>(bins), 0);
    if (result.hi <= result.lo) {
        throw DomainError("histogram range is degenerate");
    }
    const double width = (result.hi - result.lo) / bins;
    for (double v : values) {
        auto idx = static_cast<long>((v - result.lo) / width);
        idx = std::clamp(idx, 0L, static_cast<long>(bins) - 1); // last bin closed
        ++result.counts[static_cast<std::size_t>(idx)];
    }
    return result;
}

std::string render_histogram_svg(std::span<const double> scores, const LogKzStats& stats,
                                 int bins, int evaluation_year) {
    if (bins < 3) {
        throw DomainError("histogram requires bins >= 3, got " + std::to_string(bins));
    }
    if (!(stats.sigma > 0.0)) {
        throw DomainError("degenerate distribution: sigma must be positive");
    }
    std::vector<double> logs;
    logs.reserve(scores.size());
    for (double score : scores) {
        if (score > 0.0) logs.push_back(std::log(score));
    }
    if (logs.size() < 2) {
        throw InsufficientDataError("need at least 2 positive scores, got " +
                                    std::to_string(logs.size()));
    }

    const auto hist = histogram_bins(logs, bins);
    const double bin_width = (hist.hi - hist.lo) / bins;
    const double n = static_cast<double>(logs.size());

    const double inv_norm = 1.0 / (stats.sigma * std::sqrt(2.0 * 3.14159265358979323846));
    const auto normal_pdf = [&](double x) {
        const double t = (x - stats.mu) / stats.sigma;
        return inv_norm * std::exp(-0.5 * t * t);
    };

    double y_max = inv_norm; // the fitted curve peaks at the mean
    std::vector<double> densities(hist.counts.size());
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        densities[i] = static_cast<double>(hist.counts[i]) / (n * bin_width);
        y_max = std::max(y_max, densities[i]);
    }

    PlotFrame frame;
    frame.x_min = hist.lo;
    frame.x_max = hist.hi;
    frame.y_min = 0.0;
    frame.y_max = y_max * 1.08;

    std::string out = svg_open(frame, evaluation_year);

    for (std::size_t i = 0; i < densities.size(); ++i) {
        const double x0 = hist.lo + bin_width * static_cast<double>(i);
        const double x1 = x0 + bin_width;
        out += "<rect class=\"bin\" x=\"" + format_fixed(frame.px(x0), 2) + "\" y=\"" +
               format_fixed(frame.py(densities[i]), 2) + "\" width=\"" +
               format_fixed(frame.px(x1) - frame.px(x0), 2) + "\" height=\"" +
               format_fixed(frame.py(0.0) - frame.py(densities[i]), 2) +
               "\" fill=\"#c9d7ea\" stroke=\"#34679a\" stroke-width=\"1\"/>\n";
    }

    std::string path = "M";
    const int samples = 200;
    for (int i = 0; i <= samples; ++i) {
        const double x = hist.lo + (hist.hi - hist.lo) * i / samples;
        if (i > 0) path += " L";
        path += " " + format_fixed(frame.px(x), 2) + " " + format_fixed(frame.py(normal_pdf(x)), 2);
    }
    out += "<path class=\"fit-curve\" d=\"" + path +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

    out += svg_axes(frame, "log(kz)", "density");
    out += svg_x_tick(frame, hist.lo, format_fixed(hist.lo, 2));
    out += svg_x_tick(frame, stats.mu, format_fixed(stats.mu, 2));
    out += svg_x_tick(frame, hist.hi, format_fixed(hist.hi, 2));
    for (int i = 0; i <= 4; ++i) {
        const double y = frame.y_max * i / 4.0;
        out += svg_y_tick(frame, y, format_fixed(y, 2));
    }

    out += "</svg>\n";
    return out;
}

} // namespace kz
