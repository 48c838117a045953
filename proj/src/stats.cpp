#include "platebench/stats.hpp"

#include <algorithm>
#include <cmath>

#include "platebench/error.hpp"

namespace platebench {

namespace detail {

double log_gamma(double x) {
    // Lanczos approximation, g = 7, 9 coefficients.
    static constexpr double kCoefficients[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    if (x < 0.5) {
        // Reflection formula; not hit by the F-distribution use but kept total.
        constexpr double kPi = 3.14159265358979323846;
        return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
    }
    x -= 1.0;
    double sum = kCoefficients[0];
    for (int i = 1; i < 9; ++i) sum += kCoefficients[i] / (x + i);
    const double t = x + 7.5;
    constexpr double kHalfLogTwoPi = 0.91893853320467274178;
    return kHalfLogTwoPi + (x + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

// Continued-fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kEpsilon = 1e-12; // absolute tolerance
    constexpr double kTiny = 1e-300;
    constexpr int kMaxIterations = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEpsilon) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error(ErrorKind::Precondition, "incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                             a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

} // namespace detail

AnovaResult anova_oneway(const AnovaInput& input) {
    const std::size_t k = input.groups.size();
    if (k < 2)
        throw Error(ErrorKind::Precondition, "ANOVA needs at least two groups");
    std::size_t n_total = 0;
    for (const auto& group : input.groups) {
        if (group.empty())
            throw Error(ErrorKind::Precondition, "ANOVA groups must be nonempty");
        n_total += group.size();
    }
    if (n_total <= k)
        throw Error(ErrorKind::Precondition,
                    "ANOVA needs more observations than groups (df_within >= 1)");

    // Two-pass: means first, then deviation sums of squares.
    double grand_sum = 0.0;
    std::vector<double> group_means;
    group_means.reserve(k);
    for (const auto& group : input.groups) {
        double sum = 0.0;
        for (const double x : group) sum += x;
        group_means.push_back(sum / static_cast<double>(group.size()));
        grand_sum += sum;
    }
    const double grand_mean = grand_sum / static_cast<double>(n_total);

    AnovaResult result;
    for (std::size_t j = 0; j < k; ++j) {
        const double mean_diff = group_means[j] - grand_mean;
        result.ss_between += static_cast<double>(input.groups[j].size()) * mean_diff * mean_diff;
        for (const double x : input.groups[j]) {
            const double total_dev = x - grand_mean;
            result.ss_total += total_dev * total_dev;
            const double within_dev = x - group_means[j];
            result.ss_within += within_dev * within_dev;
        }
    }
    result.df_between = k - 1;
    result.df_within = n_total - k;
    result.ms_between = result.ss_between / static_cast<double>(result.df_between);
    result.ms_within = result.ss_within / static_cast<double>(result.df_within);
    if (result.ms_within == 0.0)
        throw Error(ErrorKind::ZeroWithinVariance,
                    "all observations are equal within every group; F is undefined");
    result.f_value = result.ms_between / result.ms_within;

    // P(F_{d1,d2} > f) = I_{d2/(d2 + d1 f)}(d2/2, d1/2).
    const double d1 = static_cast<double>(result.df_between);
    const double d2 = static_cast<double>(result.df_within);
    const double x = d2 / (d2 + d1 * result.f_value);
    result.p_value = detail::regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x);
    return result;
}

RuntimeStats runtime_summary(const std::vector<double>& times, std::size_t bin_count) {
    if (times.empty())
        throw Error(ErrorKind::Precondition, "runtime_summary needs at least one sample");
    if (bin_count < 1)
        throw Error(ErrorKind::Precondition, "bin_count must be >= 1");

    RuntimeStats stats;
    stats.n = times.size();

    double sum = 0.0;
    for (const double t : times) sum += t;
    stats.mean = sum / static_cast<double>(times.size());

    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    stats.median = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;

    if (times.size() > 1) {
        double sq_sum = 0.0;
        for (const double t : times) {
            const double dev = t - stats.mean;
            sq_sum += dev * dev;
        }
        stats.std_dev = std::sqrt(sq_sum / static_cast<double>(times.size() - 1));
    }
    stats.gauss_mu = stats.mean;
    stats.gauss_sigma = stats.std_dev;

    const double lo = sorted.front();
    const double hi = sorted.back();
    stats.bin_edges.resize(bin_count + 1);
    for (std::size_t i = 0; i <= bin_count; ++i)
        stats.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bin_count);
    stats.bin_edges.back() = hi;
    stats.bin_counts.assign(bin_count, 0);
    for (const double t : times) {
        std::size_t bin;
        if (hi == lo) {
            bin = bin_count - 1; // degenerate range: every sample is the max
        } else {
            const double position = (t - lo) / (hi - lo) * static_cast<double>(bin_count);
            bin = std::min(static_cast<std::size_t>(position), bin_count - 1);
        }
        ++stats.bin_counts[bin];
    }
    return stats;
}

double gaussian_pdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0))
        throw Error(ErrorKind::OutOfRange, "sigma must be > 0");
    constexpr double kInvSqrtTwoPi = 0.3989422804014327;
    const double z = (x - mu) / sigma;
    return kInvSqrtTwoPi / sigma * std::exp(-0.5 * z * z);
}

} // namespace platebench
