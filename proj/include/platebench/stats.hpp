#pragma once

#include <cstdint>
#include <vector>

namespace platebench {

/// k >= 2 groups of observations, each nonempty, with N > k in total.
struct AnovaInput {
    std::vector<std::vector<double>> groups;
};

struct AnovaResult {
    double ss_total = 0.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    std::uint64_t df_between = 0; // k - 1
    std::uint64_t df_within = 0;  // N - k
    double ms_between = 0.0;
    double ms_within = 0.0;
    double f_value = 0.0;
    double p_value = 1.0;
};

/// One-way ANOVA with two-pass (mean then deviations) sums of squares:
///   SST = sum (X_i - grand mean)^2
///   SSB = sum n_j (group mean_j - grand mean)^2
///   SSW = sum sum (X_ij - group mean_j)^2
///   F = (SSB / (k-1)) / (SSW / (N-k))
/// p = P(F_{k-1, N-k} > F) via the regularized incomplete beta function.
/// Throws Error{ZeroWithinVariance} when SSW == 0 and Error{Precondition}
/// on invariant violations.
AnovaResult anova_oneway(const AnovaInput& input);

struct RuntimeStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0; // sample (n-1) denominator, 0 for n == 1
    std::vector<double> bin_edges;       // bin_count + 1 edges over [min, max]
    std::vector<std::uint64_t> bin_counts;
    double gauss_mu = 0.0;    // == mean
    double gauss_sigma = 0.0; // == std_dev
};

/// Mean, median, sample standard deviation and an equal-width histogram over
/// [min, max] (the max value falls in the last bin; a degenerate zero-width
/// range puts every sample there). Throws on empty input.
RuntimeStats runtime_summary(const std::vector<double>& times, std::size_t bin_count = 10);

/// Normal density (1 / (sigma sqrt(2 pi))) exp(-(x-mu)^2 / (2 sigma^2)).
double gaussian_pdf(double x, double mu, double sigma);

namespace detail {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (absolute tolerance 1e-12).
double regularized_incomplete_beta(double a, double b, double x);

double log_gamma(double x);

} // namespace detail

} // namespace platebench
