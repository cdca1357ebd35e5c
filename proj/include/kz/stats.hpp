#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "kz/errors.hpp"

namespace kz {

/// Number of standardized classes used by the goodness-of-fit test.
inline constexpr int kGofClasses = 7;

/// Standardized class boundaries, in units of sigma around the mean.
inline constexpr std::array<double, 6> kClassZCuts = {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5};

/// Moments of the natural logs of the positive scores in a sample.
struct LogKzStats {
    double mu = 0.0;    // mean of log(score)
    double sigma = 0.0; // population standard deviation (divisor n)
    long n = 0;         // positive scores used
    long excluded = 0;  // scores <= 0 dropped before the log transform
};

struct GofOptions {
    double alpha = 0.05;        // significance level of the test
    bool exact_expected = false; // chi-square against unrounded expected counts
    bool strict_dof = false;     // subtract the two estimated parameters as well
};

struct GofReport {
    LogKzStats stats;
    std::array<double, 6> class_edges{};          // mu + z*sigma at kClassZCuts
    std::array<long, kGofClasses> observed{};     // O_i
    std::array<long, kGofClasses> expected{};     // E_i, integer-rounded
    double chi_square = 0.0;
    int dof = 0;
    double alpha = 0.0;
    double critical_value = 0.0;
    bool reject = false;
    GofOptions options;
};

struct ContributorThresholds {
    double alpha = 0.0;   // tail fraction, e.g. 0.25 for top/bottom quartiles
    double lower = 0.0;   // e^(mu - z*sigma)
    double upper = 0.0;   // e^(mu + z*sigma)
    double z_alpha = 0.0; // standard-normal score used
};

struct ScoredId {
    std::string id;
    double kz = 0.0;

    bool operator==(const ScoredId&) const = default;
};

struct Classification {
    std::vector<ScoredId> top;    // kz >= upper
    std::vector<ScoredId> middle;
    std::vector<ScoredId> bottom; // kz <= lower
};

/// Fits mu and sigma over the natural logs of the strictly positive scores;
/// non-positive entries are excluded and counted. Requires at least two
/// positive scores (throws InsufficientDataError otherwise).
LogKzStats log_kz_stats(std::span<const double> scores);

/// Standard normal CDF, absolute error well under 1.5e-7.
double normal_cdf(double z);

/// Inverse of normal_cdf by bisection, |Phi(result) - p| converged past 1e-6.
/// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

/// Counts log scores into the seven half-open classes [mu+z_lo*s, mu+z_hi*s),
/// first class open below, last class closed above mu+1.5*sigma.
/// Throws DomainError when sigma is not positive.
std::array<long, kGofClasses> bin_observed(std::span<const double> log_scores,
                                           const LogKzStats& stats);

/// Probability mass of each standardized class under the normal distribution.
std::array<double, kGofClasses> class_probabilities();

/// E_i = n * p_i rounded half away from zero to integers.
std::array<long, kGofClasses> expected_frequencies(long n);

/// Pearson statistic sum (O_i - E_i)^2 / E_i. Throws DomainError on length
/// mismatch or a non-positive expected count.
double chi_square_statistic(std::span<const long> observed,
                            std::span<const double> expected);

/// Regularized lower incomplete gamma P(a, x), series/continued-fraction form.
double regularized_gamma_p(double a, double x);

/// CDF of the chi-square distribution with dof degrees of freedom.
double chi_square_cdf(double x, int dof);

/// (1 - alpha) quantile of the chi-square distribution, inverted by bisection.
double chi_square_critical(int dof, double alpha);

/// Full pipeline: fit log moments, bin, compare to expected frequencies, test
/// against the chi-square critical value at 6 degrees of freedom (classes - 1;
/// options.strict_dof subtracts the two estimated parameters as well).
GofReport goodness_of_fit(std::span<const double> scores, const GofOptions& options = {});

/// Score cutoffs isolating the top/bottom alpha fraction of a log-normal
/// cohort. alpha = 0.25 uses the conventional 0.67 standard score; other
/// fractions use normal_quantile(1 - alpha). Requires 0 < alpha < 0.5.
ContributorThresholds contributor_thresholds(const LogKzStats& stats, double alpha);

/// Partitions scored ids into top (kz >= upper), bottom (kz <= lower) and
/// middle. Input order is preserved within each part.
Classification classify(std::span<const ScoredId> scores,
                        const ContributorThresholds& thresholds);

} // namespace kz
