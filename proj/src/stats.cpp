#include "kz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kz {

namespace {

constexpr int kMaxGammaIterations = 500;

// Series representation of P(a, x); converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
    const double gln = std::lgamma(a);
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxGammaIterations; ++n) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * std::numeric_limits<double>::epsilon()) {
            return sum * std::exp(-x + a * std::log(x) - gln);
        }
    }
    throw DomainError("incomplete gamma series failed to converge");
}

// Continued fraction for Q(a, x) = 1 - P(a, x), modified Lentz method.
double gamma_q_continued_fraction(double a, double x) {
    const double gln = std::lgamma(a);
    const double fpmin = std::numeric_limits<double>::min() /
                         std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxGammaIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= std::numeric_limits<double>::epsilon()) {
            return std::exp(-x + a * std::log(x) - gln) * h;
        }
    }
    throw DomainError("incomplete gamma continued fraction failed to converge");
}

} // namespace

LogKzStats log_kz_stats(std::span<const double> scores) {
    std::vector<double> logs;
    logs.reserve(scores.size());
    long excluded = 0;
    for (double score : scores) {
        if (score > 0.0) logs.push_back(std::log(score));
        else ++excluded;
    }
    if (logs.size() < 2) {
        throw InsufficientDataError("need at least 2 positive scores, got " +
                                    std::to_string(logs.size()));
    }

    double sum = 0.0;
    for (double y : logs) sum += y;
    const double mu = sum / static_cast<double>(logs.size());
    double ss = 0.0;
    for (double y : logs) ss += (y - mu) * (y - mu);
    // Population standard deviation (divisor n).
    const double sigma = std::sqrt(ss / static_cast<double>(logs.size()));

    return LogKzStats{mu, sigma, static_cast<long>(logs.size()), excluded};
}

// Hart's rational approximation for normal probabilities (Algorithm 5666 for
// the error function); absolute error around 1e-15.
double normal_cdf(double z) {
    static constexpr double p0 = 220.2068679123761;
    static constexpr double p1 = 221.2135961699311;
    static constexpr double p2 = 112.0792914978709;
    static constexpr double p3 = 33.91286607838300;
    static constexpr double p4 = 6.373962203531650;
    static constexpr double p5 = 0.7003830644436881;
    static constexpr double p6 = 0.03526249659989109;

    static constexpr double q0 = 440.4137358247522;
    static constexpr double q1 = 793.8265125199484;
    static constexpr double q2 = 637.3336333788311;
    static constexpr double q3 = 296.5642487796737;
    static constexpr double q4 = 86.78073220294608;
    static constexpr double q5 = 16.06417757920695;
    static constexpr double q6 = 1.755667163182642;
    static constexpr double q7 = 0.08838834764831844;

    static constexpr double cutoff = 7.071; // 10 / sqrt(2)
    static constexpr double root2pi = 2.506628274631001;

    if (z > 37.0) return 1.0;
    if (z < -37.0) return 0.0;

    const double zabs = std::fabs(z);
    const double expntl = std::exp(-0.5 * zabs * zabs);
    double p;
    if (zabs < cutoff) {
        p = expntl *
            ((((((p6 * zabs + p5) * zabs + p4) * zabs + p3) * zabs + p2) * zabs + p1) * zabs +
             p0) /
            (((((((q7 * zabs + q6) * zabs + q5) * zabs + q4) * zabs + q3) * zabs + q2) * zabs +
              q1) * zabs +
             q0);
    } else {
        const double pdf = expntl / root2pi;
        p = pdf / (zabs + 1.0 / (zabs + 2.0 / (zabs + 3.0 / (zabs + 4.0 / (zabs + 0.65)))));
    }
    return z < 0.0 ? p : 1.0 - p;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("probability must be in (0, 1), got " + std::to_string(p));
    }
    double lo = -40.0;
    double hi = 40.0;
    // 120 halvings of an 80-wide bracket end far below the 1e-6 contract.
    for (int i = 0; i < 120 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::array<long, kGofClasses> bin_observed(std::span<const double> log_scores,
                                           const LogKzStats& stats) {
    if (!(stats.sigma > 0.0)) {
        throw DomainError("degenerate distribution: sigma must be positive");
    }
    std::array<double, 6> edges;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges[i] = stats.mu + kClassZCuts[i] * stats.sigma;
    }
    std::array<long, kGofClasses> counts{};
    for (double y : log_scores) {
        // Lower bound inclusive, upper exclusive; first class open below.
        std::size_t cls = 0;
        while (cls < edges.size() && y >= edges[cls]) ++cls;
        ++counts[cls];
    }
    return counts;
}

std::array<double, kGofClasses> class_probabilities() {
    std::array<double, kGofClasses> probs{};
    double prev = 0.0;
    for (std::size_t i = 0; i < kClassZCuts.size(); ++i) {
        const double cdf = normal_cdf(kClassZCuts[i]);
        probs[i] = cdf - prev;
        prev = cdf;
    }
    probs[kGofClasses - 1] = 1.0 - prev;
    return probs;
}

std::array<long, kGofClasses> expected_frequencies(long n) {
    if (n < 0) {
        throw DomainError("sample size must be non-negative, got " + std::to_string(n));
    }
    const auto probs = class_probabilities();
    std::array<long, kGofClasses> expected{};
    for (std::size_t i = 0; i < probs.size(); ++i) {
        expected[i] = std::llround(static_cast<double>(n) * probs[i]);
    }
    return expected;
}

double chi_square_statistic(std::span<const long> observed,
                            std::span<const double> expected) {
    if (observed.size() != expected.size()) {
        throw DomainError("observed and expected lengths differ: " +
                          std::to_string(observed.size()) + " vs " +
                          std::to_string(expected.size()));
    }
    double chi = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) {
            throw DomainError("expected count must be positive in class " + std::to_string(i));
        }
        const double diff = static_cast<double>(observed[i]) - expected[i];
        chi += diff * diff / expected[i];
    }
    return chi;
}

double regularized_gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) {
        throw DomainError("regularized_gamma_p requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi_square_cdf(double x, int dof) {
    if (dof < 1) {
        throw DomainError("degrees of freedom must be >= 1, got " + std::to_string(dof));
    }
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_critical(int dof, double alpha) {
    if (dof < 1) {
        throw DomainError("degrees of freedom must be >= 1, got " + std::to_string(dof));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must be in (0, 1), got " + std::to_string(alpha));
    }
    const double target = 1.0 - alpha;
    double hi = std::max(10.0, 4.0 * dof);
    while (chi_square_cdf(hi, dof) < target) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, dof) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

GofReport goodness_of_fit(std::span<const double> scores, const GofOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
        throw DomainError("alpha must be in (0, 1), got " + std::to_string(options.alpha));
    }

    GofReport report;
    report.options = options;
    report.alpha = options.alpha;
    report.stats = log_kz_stats(scores);

    std::vector<double> logs;
    logs.reserve(scores.size());
    for (double score : scores) {
        if (score > 0.0) logs.push_back(std::log(score));
    }

    report.observed = bin_observed(logs, report.stats);
    for (std::size_t i = 0; i < report.class_edges.size(); ++i) {
        report.class_edges[i] = report.stats.mu + kClassZCuts[i] * report.stats.sigma;
    }
    report.expected = expected_frequencies(report.stats.n);

    std::array<double, kGofClasses> expected_for_stat{};
    if (options.exact_expected) {
        const auto probs = class_probabilities();
        for (std::size_t i = 0; i < probs.size(); ++i) {
            expected_for_stat[i] = static_cast<double>(report.stats.n) * probs[i];
        }
    } else {
        for (std::size_t i = 0; i < report.expected.size(); ++i) {
            expected_for_stat[i] = static_cast<double>(report.expected[i]);
        }
    }

    report.chi_square = chi_square_statistic(report.observed, expected_for_stat);
    report.dof = options.strict_dof ? kGofClasses - 3 : kGofClasses - 1;
    report.critical_value = chi_square_critical(report.dof, options.alpha);
    report.reject = report.chi_square > report.critical_value;
    return report;
}

ContributorThresholds contributor_thresholds(const LogKzStats& stats, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw DomainError("tail fraction must be in (0, 0.5), got " + std::to_string(alpha));
    }
    ContributorThresholds thresholds;
    thresholds.alpha = alpha;
    // The quartile case uses the conventional two-decimal 0.67 score.
    thresholds.z_alpha = alpha == 0.25 ? 0.67 : normal_quantile(1.0 - alpha);
    thresholds.upper = std::exp(stats.mu + thresholds.z_alpha * stats.sigma);
    thresholds.lower = std::exp(stats.mu - thresholds.z_alpha * stats.sigma);
    return thresholds;
}

Classification classify(std::span<const ScoredId> scores,
                        const ContributorThresholds& thresholds) {
    Classification result;
    for (const auto& entry : scores) {
        if (entry.kz >= thresholds.upper) result.top.push_back(entry);
        else if (entry.kz <= thresholds.lower) result.bottom.push_back(entry);
        else result.middle.push_back(entry);
    }
    return result;
}

} // namespace kz
