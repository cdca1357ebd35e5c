#include "kz/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv_util.hpp"
#include "kz/metrics.hpp"
#include "kz/model.hpp"
#include "kz/report.hpp"
#include "kz/stats.hpp"

namespace kz {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open input file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw Error("cannot open output file: " + out_path);
    }
    out << text;
    out.flush();
    if (!out) {
        throw Error("failed writing output file: " + out_path);
    }
}

bool looks_like_json(const std::string& text, const std::string& path) {
    if (path.size() >= 5 && path.ends_with(".json")) return true;
    if (path.size() >= 4 && path.ends_with(".csv")) return false;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '{' || c == '[';
    }
    return false;
}

OutputFormat to_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    return OutputFormat::text;
}

// What a data file turned out to contain.
struct LoadedInput {
    enum class Kind { profiles, scores, reports } kind = Kind::profiles;
    ProfileSet profiles;
    std::vector<ScoredId> scores;
    std::vector<MetricReport> reports;
};

LoadedInput load_input(const std::string& path) {
    const std::string text = read_file(path);
    LoadedInput input;

    if (looks_like_json(text, path)) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what());
        }
        if (doc.is_object() && doc.contains("researchers")) {
            input.kind = LoadedInput::Kind::profiles;
            input.profiles = parse_profiles_json(text, path);
        } else if (doc.is_object() && doc.contains("reports")) {
            input.kind = LoadedInput::Kind::reports;
            input.reports = parse_reports_json(text);
        } else if (doc.is_object() && doc.contains("scores") && doc["scores"].is_array()) {
            input.kind = LoadedInput::Kind::scores;
            std::size_t index = 0;
            for (const auto& entry : doc["scores"]) {
                ++index;
                if (entry.is_number()) {
                    input.scores.push_back(ScoredId{"s" + std::to_string(index),
                                                    entry.get<double>()});
                } else if (entry.is_object() && entry.contains("id") && entry.contains("kz") &&
                           entry["id"].is_string() && entry["kz"].is_number()) {
                    input.scores.push_back(ScoredId{entry["id"].get<std::string>(),
                                                    entry["kz"].get<double>()});
                } else {
                    throw ParseError("bad score entry at /scores/" + std::to_string(index - 1) +
                                     "; expected a number or {\"id\",\"kz\"}");
                }
            }
        } else {
            throw ParseError("unrecognized document: expected a top-level \"researchers\", "
                             "\"reports\" or \"scores\" key");
        }
        return input;
    }

    // CSV: pick the schema by header line.
    std::size_t line_start = 0;
    std::string header;
    while (line_start < text.size()) {
        std::size_t eol = text.find('\n', line_start);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(line_start, eol - line_start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] != '#') {
            header = line;
            break;
        }
        line_start = eol + 1;
    }
    if (header == "researcher_id,year,citations") {
        input.kind = LoadedInput::Kind::profiles;
        input.profiles = parse_profiles_csv(text, path);
    } else if (header.starts_with("id,career_length,")) {
        input.kind = LoadedInput::Kind::reports;
        input.reports = parse_reports_csv(text);
    } else {
        throw ParseError("unrecognized CSV header: \"" + header + "\"");
    }
    return input;
}

std::vector<MetricReport> reports_for(const LoadedInput& input, const EvaluationContext& ctx) {
    switch (input.kind) {
        case LoadedInput::Kind::profiles: {
            const ProfileSet validated = validate(input.profiles, ctx);
            std::vector<MetricReport> reports;
            reports.reserve(validated.researchers.size());
            for (const auto& profile : validated.researchers) {
                reports.push_back(metric_report(profile, ctx));
            }
            return reports;
        }
        case LoadedInput::Kind::reports:
            return input.reports;
        case LoadedInput::Kind::scores:
            throw Error("this command needs profiles or reports, not bare scores");
    }
    return {};
}

// (id, kz) pairs for the cohort commands; empty profiles are skipped.
std::vector<ScoredId> scored_entries(const LoadedInput& input, const EvaluationContext& ctx) {
    if (input.kind == LoadedInput::Kind::scores) return input.scores;
    std::vector<ScoredId> entries;
    for (const auto& report : reports_for(input, ctx)) {
        if (report.empty_profile) continue;
        entries.push_back(ScoredId{report.researcher_id, report.kz});
    }
    return entries;
}

std::vector<double> values_of(const std::vector<ScoredId>& entries) {
    std::vector<double> values;
    values.reserve(entries.size());
    for (const auto& entry : entries) values.push_back(entry.kz);
    return values;
}

void sort_by_kz_desc(std::vector<ScoredId>& entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const ScoredId& a, const ScoredId& b) {
        if (a.kz != b.kz) return a.kz > b.kz;
        return a.id < b.id;
    });
}

const std::array<const char*, kGofClasses> kClassLabels = {
    "log(kz) < mu - 1.5*sigma",
    "mu - 1.5*sigma <= log(kz) < mu - sigma",
    "mu - sigma <= log(kz) < mu - 0.5*sigma",
    "mu - 0.5*sigma <= log(kz) < mu + 0.5*sigma",
    "mu + 0.5*sigma <= log(kz) < mu + sigma",
    "mu + sigma <= log(kz) < mu + 1.5*sigma",
    "log(kz) >= mu + 1.5*sigma",
};

std::string render_cohort_text(const GofReport& gof, const ContributorThresholds& thresholds,
                               int evaluation_year) {
    std::string out = "# evaluation_year: " + std::to_string(evaluation_year) + "\n";
    out += "samples: " + std::to_string(gof.stats.n) +
           " (excluded non-positive: " + std::to_string(gof.stats.excluded) + ")\n";
    out += "mu = " + format_fixed(gof.stats.mu, 5) + "\n";
    out += "sigma = " + format_fixed(gof.stats.sigma, 5) + "\n";

    std::size_t label_width = 0;
    for (const auto* label : kClassLabels) label_width = std::max(label_width, std::string(label).size());
    out += std::string("class") + std::string(label_width - 5, ' ') + "  observed  expected\n";
    for (int i = 0; i < kGofClasses; ++i) {
        std::string label = kClassLabels[i];
        label += std::string(label_width - label.size(), ' ');
        std::string observed = std::to_string(gof.observed[i]);
        std::string expected = std::to_string(gof.expected[i]);
        out += label + "  " + std::string(8 - std::min<std::size_t>(8, observed.size()), ' ') +
               observed + "  " + std::string(8 - std::min<std::size_t>(8, expected.size()), ' ') +
               expected + "\n";
    }

    out += "chi_square = " + format_fixed(gof.chi_square, 3);
    if (gof.options.exact_expected) out += " (exact expected frequencies)";
    out += "\n";
    out += "dof = " + std::to_string(gof.dof);
    if (gof.options.strict_dof) out += " (estimated parameters subtracted)";
    out += "\n";
    out += "critical_value = " + format_fixed(gof.critical_value, 3) +
           " (alpha = " + format_fixed(gof.alpha, 2) + ")\n";
    out += std::string("decision: ") +
           (gof.reject ? "reject (log(kz) is not consistent with a normal distribution)"
                       : "fail to reject (log(kz) is consistent with a normal distribution)") +
           "\n";
    out += "thresholds (tail fraction " + format_fixed(thresholds.alpha, 2) +
           "): lower = " + format_fixed(thresholds.lower, 4) +
           ", upper = " + format_fixed(thresholds.upper, 4) +
           " (z = " + format_fixed(thresholds.z_alpha, 4) + ")\n";
    return out;
}

ordered_json thresholds_json(const ContributorThresholds& thresholds) {
    return ordered_json{{"alpha", thresholds.alpha},
                        {"z_alpha", thresholds.z_alpha},
                        {"lower", thresholds.lower},
                        {"upper", thresholds.upper}};
}

std::string render_cohort_json(const GofReport& gof, const ContributorThresholds& thresholds,
                               int evaluation_year) {
    ordered_json doc;
    doc["evaluation_year"] = evaluation_year;
    doc["samples"] = gof.stats.n;
    doc["excluded_non_positive"] = gof.stats.excluded;
    doc["mu"] = gof.stats.mu;
    doc["sigma"] = gof.stats.sigma;
    ordered_json classes = ordered_json::array();
    for (int i = 0; i < kGofClasses; ++i) {
        classes.push_back({{"class", kClassLabels[i]},
                           {"observed", gof.observed[i]},
                           {"expected", gof.expected[i]}});
    }
    doc["classes"] = std::move(classes);
    doc["chi_square"] = gof.chi_square;
    doc["exact_expected"] = gof.options.exact_expected;
    doc["dof"] = gof.dof;
    doc["alpha"] = gof.alpha;
    doc["critical_value"] = gof.critical_value;
    doc["reject"] = gof.reject;
    doc["decision"] = gof.reject ? "reject" : "fail to reject";
    doc["thresholds"] = thresholds_json(thresholds);
    return doc.dump(2) + "\n";
}

std::string render_classification(const Classification& classes,
                                  const ContributorThresholds& thresholds, OutputFormat format,
                                  int evaluation_year) {
    auto sorted = classes;
    sort_by_kz_desc(sorted.top);
    sort_by_kz_desc(sorted.middle);
    sort_by_kz_desc(sorted.bottom);

    if (format == OutputFormat::json) {
        ordered_json doc;
        doc["evaluation_year"] = evaluation_year;
        doc["thresholds"] = thresholds_json(thresholds);
        const auto section = [](const std::vector<ScoredId>& entries) {
            ordered_json list = ordered_json::array();
            for (const auto& entry : entries) {
                list.push_back({{"id", entry.id}, {"kz", round_half_away(entry.kz, 3)}});
            }
            return list;
        };
        doc["top"] = section(sorted.top);
        doc["middle"] = section(sorted.middle);
        doc["bottom"] = section(sorted.bottom);
        return doc.dump(2) + "\n";
    }

    if (format == OutputFormat::csv) {
        std::string out = "# evaluation_year: " + std::to_string(evaluation_year) + "\n";
        out += "# lower = " + format_fixed(thresholds.lower, 4) +
               ", upper = " + format_fixed(thresholds.upper, 4) + "\n";
        out += "id,kz,category\n";
        const auto rows = [&out](const std::vector<ScoredId>& entries, const char* category) {
            for (const auto& entry : entries) {
                out += detail::csv_quote(entry.id) + "," + format_fixed(entry.kz, 3) + "," +
                       category + "\n";
            }
        };
        rows(sorted.top, "top");
        rows(sorted.middle, "middle");
        rows(sorted.bottom, "bottom");
        return out;
    }

    std::string out = "# evaluation_year: " + std::to_string(evaluation_year) + "\n";
    out += "# thresholds: tail fraction " + format_fixed(thresholds.alpha, 2) +
           ", lower = " + format_fixed(thresholds.lower, 4) +
           ", upper = " + format_fixed(thresholds.upper, 4) +
           " (z = " + format_fixed(thresholds.z_alpha, 4) + ")\n";
    const auto section = [&out](const std::vector<ScoredId>& entries, const char* name) {
        out += std::string(name) + " (n = " + std::to_string(entries.size()) + "):\n";
        for (const auto& entry : entries) {
            out += "  " + entry.id + "  " + format_fixed(entry.kz, 3) + "\n";
        }
    };
    section(sorted.top, "top");
    section(sorted.middle, "middle");
    section(sorted.bottom, "bottom");
    return out;
}

} // namespace

int system_clock_year() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    return 1900 + utc.tm_year;
}

int run(const std::vector<std::string>& args, const CliEnv& env) {
    std::ostream& out = env.out ? *env.out : std::cout;
    std::ostream& err = env.err ? *env.err : std::cerr;
    const auto getenv_str = [&env](const char* name) -> std::string {
        if (env.getenv_fn) return env.getenv_fn(name);
        const char* value = std::getenv(name);
        return value ? value : "";
    };

    CLI::App app{"continuous research impact toolkit"};
    app.name("kz");
    app.require_subcommand(1);

    std::string input, output, format_name = "text", researcher, by = "kz", kind = "scatter";
    std::string author, base_url, email;
    int year = 0;
    int bins = 20, page_size = 200, delay_ms = 100;
    double significance = 0.05, tail = 0.25, timeout = 30.0;
    bool exact_expected = false, strict_dof = false, log_y = false;

    const auto add_year = [&year](CLI::App* cmd) {
        cmd->add_option("--year", year, "evaluation year (defaults to the current year)")
            ->check(CLI::Range(1000, 9999));
    };
    const auto add_output = [&output](CLI::App* cmd) {
        cmd->add_option("-o,--output", output, "write to a file instead of stdout");
    };
    const auto add_format = [&format_name](CLI::App* cmd,
                                           const std::vector<std::string>& choices) {
        cmd->add_option("--format", format_name, "output format")
            ->check(CLI::IsMember(choices));
    };

    CLI::App* compute = app.add_subcommand("compute", "metric report per researcher");
    compute->add_option("input", input, "profiles file (JSON or CSV)")->required();
    add_year(compute);
    add_format(compute, {"csv", "json", "text"});
    add_output(compute);

    CLI::App* breakdown =
        app.add_subcommand("breakdown", "per-publication impact table for one researcher");
    breakdown->add_option("input", input, "profiles file (JSON or CSV)")->required();
    breakdown->add_option("--researcher", researcher, "researcher id")->required();
    add_year(breakdown);
    add_format(breakdown, {"csv", "json", "text"});
    add_output(breakdown);

    CLI::App* rank = app.add_subcommand("rank", "sorted metric reports");
    rank->add_option("input", input, "profiles file or a compute output (CSV/JSON)")->required();
    rank->add_option("--by", by, "sort key")
        ->check(CLI::IsMember({"kz", "h", "g", "citations", "career"}));
    add_year(rank);
    add_format(rank, {"csv", "json", "text"});
    add_output(rank);

    CLI::App* cohort = app.add_subcommand("cohort", "log-normal goodness of fit over a cohort");
    cohort->add_option("input", input, "profiles file or {\"scores\":[...]} document")->required();
    cohort->add_option("--alpha", significance, "significance level of the test")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cohort->add_option("--tail", tail, "tail fraction for the contributor thresholds");
    cohort->add_flag("--exact-expected", exact_expected,
                     "chi-square against unrounded expected frequencies");
    cohort->add_flag("--strict-dof", strict_dof,
                     "subtract the two estimated parameters from the degrees of freedom");
    add_year(cohort);
    add_format(cohort, {"json", "text"});
    add_output(cohort);

    CLI::App* classify_cmd =
        app.add_subcommand("classify", "top/middle/bottom contributor partition");
    classify_cmd->add_option("input", input, "profiles file or {\"scores\":[...]} document")
        ->required();
    classify_cmd->add_option("--alpha", tail, "tail fraction (default 0.25)");
    add_year(classify_cmd);
    add_format(classify_cmd, {"csv", "json", "text"});
    add_output(classify_cmd);

    CLI::App* plot = app.add_subcommand("plot", "SVG plots");
    plot->add_option("input", input, "profiles file (scatter) or scores (hist)")->required();
    plot->add_option("--kind", kind, "plot kind")->check(CLI::IsMember({"scatter", "hist"}));
    plot->add_option("--bins", bins, "histogram bin count")->check(CLI::Range(3, 1000));
    plot->add_flag("--log-y", log_y, "logarithmic y axis (scatter)");
    add_year(plot);
    plot->add_option("-o,--output", output, "output SVG file")->required();

    CLI::App* fetch_cmd =
        app.add_subcommand("fetch", "build a profile from an OpenAlex-compatible works API");
    fetch_cmd->add_option("--author", author, "author identifier")->required();
    fetch_cmd->add_option("--base-url", base_url, "API root (or $KZ_API_BASE_URL)");
    fetch_cmd->add_option("--email", email, "contact email for polite pool (or $KZ_POLITE_EMAIL)");
    fetch_cmd->add_option("--page-size", page_size, "works per page")->check(CLI::Range(1, 200));
    fetch_cmd->add_option("--timeout", timeout, "request timeout in seconds")
        ->check(CLI::PositiveNumber);
    fetch_cmd->add_option("--delay-ms", delay_ms, "pause between page requests")
        ->check(CLI::Range(0, 60000));
    add_output(fetch_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'kz --help' for usage\n";
        return 1;
    }

    const int evaluation_year = year != 0 ? year : env.current_year();
    const EvaluationContext ctx{evaluation_year};

    try {
        if (app.got_subcommand(compute)) {
            const auto reports = reports_for(load_input(input), ctx);
            RenderOptions opts;
            opts.format = to_format(format_name);
            opts.evaluation_year = evaluation_year;
            write_output(render_reports(reports, opts), output, out);
            return 0;
        }

        if (app.got_subcommand(breakdown)) {
            const LoadedInput loaded = load_input(input);
            if (loaded.kind != LoadedInput::Kind::profiles) {
                throw Error("breakdown needs per-publication data; input must be profiles");
            }
            const ProfileSet set = validate(loaded.profiles, ctx);
            const ResearcherProfile* match = nullptr;
            for (const auto& profile : set.researchers) {
                if (profile.id == researcher) {
                    match = &profile;
                    break;
                }
            }
            if (match == nullptr) {
                throw Error("researcher \"" + researcher + "\" not found in " + input);
            }
            const auto rows = kz_breakdown(*match, ctx);
            RenderOptions opts;
            opts.format = to_format(format_name);
            opts.evaluation_year = evaluation_year;
            opts.label = match->id + " (h = " +
                         std::to_string(h_index(match->citation_counts())) + ")";
            write_output(render_breakdown(rows, opts), output, out);
            return 0;
        }

        if (app.got_subcommand(rank)) {
            auto reports = reports_for(load_input(input), ctx);
            std::stable_sort(reports.begin(), reports.end(),
                             [&by](const MetricReport& a, const MetricReport& b) {
                                 const auto key = [&by](const MetricReport& r) -> double {
                                     if (by == "h") return r.h_index;
                                     if (by == "g") return r.g_index;
                                     if (by == "citations") return r.total_citations;
                                     if (by == "career") return r.career_length;
                                     return r.kz;
                                 };
                                 if (key(a) != key(b)) return key(a) > key(b);
                                 return a.researcher_id < b.researcher_id;
                             });
            RenderOptions opts;
            opts.format = to_format(format_name);
            opts.evaluation_year = evaluation_year;
            opts.sort_by_kz = false; // already ordered by the requested key
            write_output(render_reports(reports, opts), output, out);
            return 0;
        }

        if (app.got_subcommand(cohort)) {
            const auto entries = scored_entries(load_input(input), ctx);
            const auto values = values_of(entries);
            GofOptions gof_options;
            gof_options.alpha = significance;
            gof_options.exact_expected = exact_expected;
            gof_options.strict_dof = strict_dof;
            const GofReport gof = goodness_of_fit(values, gof_options);
            const ContributorThresholds thresholds = contributor_thresholds(gof.stats, tail);
            const std::string text =
                to_format(format_name) == OutputFormat::json
                    ? render_cohort_json(gof, thresholds, evaluation_year)
                    : render_cohort_text(gof, thresholds, evaluation_year);
            write_output(text, output, out);
            return 0;
        }

        if (app.got_subcommand(classify_cmd)) {
            const auto entries = scored_entries(load_input(input), ctx);
            const auto stats = log_kz_stats(values_of(entries));
            const ContributorThresholds thresholds = contributor_thresholds(stats, tail);
            const Classification classes = classify(entries, thresholds);
            write_output(render_classification(classes, thresholds, to_format(format_name),
                                               evaluation_year),
                         output, out);
            return 0;
        }

        if (app.got_subcommand(plot)) {
            const LoadedInput loaded = load_input(input);
            std::string svg;
            if (kind == "scatter") {
                if (loaded.kind != LoadedInput::Kind::profiles) {
                    throw Error("scatter plots need career lengths; input must be profiles");
                }
                const ProfileSet set = validate(loaded.profiles, ctx);
                ScatterSpec spec;
                spec.log_y = log_y;
                spec.evaluation_year = evaluation_year;
                for (const auto& profile : set.researchers) {
                    if (profile.publications.empty()) continue;
                    spec.points.push_back(
                        ScatterPoint{static_cast<double>(career_length(profile, ctx)),
                                     kz_score(profile, ctx), profile.id});
                }
                svg = render_scatter_svg(spec);
            } else {
                const auto values = values_of(scored_entries(loaded, ctx));
                const auto stats = log_kz_stats(values);
                svg = render_histogram_svg(values, stats, bins, evaluation_year);
            }
            write_output(svg, output, out);
            return 0;
        }

        if (app.got_subcommand(fetch_cmd)) {
            FetchConfig cfg;
            if (!base_url.empty()) cfg.base_url = base_url;
            else if (const std::string env_url = getenv_str("KZ_API_BASE_URL"); !env_url.empty())
                cfg.base_url = env_url;
            if (!email.empty()) cfg.polite_email = email;
            else cfg.polite_email = getenv_str("KZ_POLITE_EMAIL");
            cfg.author_id = author;
            cfg.page_size = page_size;
            cfg.timeout_seconds = timeout;
            cfg.request_delay_ms = delay_ms;

            const ResearcherProfile profile = env.http
                                                  ? fetch_author_profile(cfg, env.http)
                                                  : fetch_author_profile(cfg);
            ProfileSet set;
            set.researchers.push_back(profile);
            set.source = cfg.base_url;
            write_output(serialize_profiles_json(set), output, out);
            return 0;
        }
    } catch (const TransportError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    err << "error: no command\n";
    return 1;
}

} // namespace kz
