#include <doctest.h>

#include <random>

#include "platebench/error.hpp"
#include "platebench/stats.hpp"

#include "oracles.hpp"

using namespace platebench;

TEST_CASE("anova worked example: {1,2,3} vs {2,3,4}") {
    const AnovaResult result = anova_oneway({{{1, 2, 3}, {2, 3, 4}}});
    CHECK(result.ss_between == 1.5);
    CHECK(result.ss_within == 4.0);
    CHECK(result.ss_total == 5.5);
    CHECK(result.df_between == 1);
    CHECK(result.df_within == 4);
    CHECK(result.ms_between == 1.5);
    CHECK(result.ms_within == 1.0);
    CHECK(result.f_value == 1.5);
    // frozen reference: survival of F(1,4) at 1.5
    CHECK(result.p_value == doctest::Approx(0.2878641347266907).epsilon(1e-10));

    const oracles::AnovaOracle oracle = oracles::anova_textbook({{1, 2, 3}, {2, 3, 4}});
    CHECK(result.ss_between == oracle.ssb);
    CHECK(result.ss_within == oracle.ssw);
    CHECK(result.f_value == oracle.f);
}

TEST_CASE("anova with identical group means has F == 0") {
    const AnovaResult result = anova_oneway({{{1, 3}, {0, 4}}});
    CHECK(result.ss_between == 0.0);
    CHECK(result.f_value == 0.0);
    CHECK(result.p_value == 1.0);
}

TEST_CASE("anova shift invariance is exact for the integer example") {
    const AnovaResult base = anova_oneway({{{1, 2, 3}, {2, 3, 4}}});
    const AnovaResult shifted = anova_oneway({{{101, 102, 103}, {102, 103, 104}}});
    CHECK(base.f_value == shifted.f_value);
    CHECK(base.p_value == shifted.p_value);
}

TEST_CASE("anova partition identity and F invariance on random inputs") {
    std::mt19937 rng(2718);
    std::uniform_int_distribution<int> k_dist(2, 6);
    std::uniform_int_distribution<int> n_dist(2, 30);
    std::uniform_real_distribution<double> value(-50.0, 50.0);
    std::uniform_real_distribution<double> shift(-100.0, 100.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);

    for (int trial = 0; trial < 200; ++trial) {
        AnovaInput input;
        for (int g = k_dist(rng); g > 0; --g) {
            std::vector<double> group;
            for (int i = n_dist(rng); i > 0; --i) group.push_back(value(rng));
            input.groups.push_back(std::move(group));
        }
        AnovaResult result;
        try {
            result = anova_oneway(input);
        } catch (const Error&) {
            continue; // zero within-variance draw, astronomically unlikely
        }
        CHECK(std::fabs(result.ss_total - (result.ss_between + result.ss_within)) <=
              1e-9 * std::max(1.0, result.ss_total));

        const double ds = shift(rng);
        const double dc = scale(rng);
        AnovaInput transformed;
        for (const auto& group : input.groups) {
            std::vector<double> mapped;
            for (const double x : group) mapped.push_back(x * dc + ds);
            transformed.groups.push_back(std::move(mapped));
        }
        const AnovaResult after = anova_oneway(transformed);
        CHECK(std::fabs(after.f_value - result.f_value) <=
              1e-9 * std::max(1.0, std::fabs(result.f_value)));
        CHECK(result.p_value >= 0.0);
        CHECK(result.p_value <= 1.0);
        CHECK(result.f_value >= 0.0);
    }
}

TEST_CASE("anova error contracts") {
    SUBCASE("zero within-group variance") {
        try {
            (void)anova_oneway({{{2, 2}, {5, 5}}});
            FAIL("expected zero-within-variance error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ZeroWithinVariance);
        }
    }
    SUBCASE("fewer than two groups") {
        CHECK_THROWS_AS((void)anova_oneway({{{1, 2, 3}}}), Error);
    }
    SUBCASE("empty group") {
        CHECK_THROWS_AS((void)anova_oneway({{{1, 2}, {}}}), Error);
    }
    SUBCASE("no residual degrees of freedom") {
        CHECK_THROWS_AS((void)anova_oneway({{{1}, {2}}}), Error);
    }
}

TEST_CASE("p-value is monotone non-increasing in F") {
    double previous = 1.0;
    for (double f = 0.0; f <= 50.0; f += 0.5) {
        // direct survival computation with the same dfs as the worked example
        const double x = 4.0 / (4.0 + 1.0 * f);
        const double p = detail::regularized_incomplete_beta(2.0, 0.5, x);
        CHECK(p <= previous + 1e-15);
        previous = p;
    }
}

TEST_CASE("regularized incomplete beta against frozen references") {
    using detail::regularized_incomplete_beta;
    CHECK(regularized_incomplete_beta(0.5, 2.0, 3.0 / 11.0) ==
          doctest::Approx(0.712135865273309338).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.4) == doctest::Approx(0.5248).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(5.0, 1.5, 0.9) ==
          doctest::Approx(0.77617213431621560597).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2.0, 2.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 2.0, 1.0) == 1.0);
}

TEST_CASE("anova p-values against frozen F survival references") {
    // p = P(F_{d1,d2} > f), frozen from an independent high-precision source
    struct Case {
        double f, d1, d2, p;
    };
    const Case cases[] = {
        {1.5, 1, 4, 0.287864134726690662},
        {3.25, 3, 16, 0.049524030887068568},
        {0.5, 2, 10, 0.62092132305915517},
        {10.0, 4, 40, 1.049041748046875e-05},
        {2.0, 5, 3, 0.30154736269507583},
    };
    for (const Case& c : cases) {
        const double x = c.d2 / (c.d2 + c.d1 * c.f);
        const double p = detail::regularized_incomplete_beta(c.d2 / 2.0, c.d1 / 2.0, x);
        CHECK(p == doctest::Approx(c.p).epsilon(1e-10));
    }
}

TEST_CASE("runtime_summary matches the sort/sum oracle") {
    SUBCASE("singleton") {
        const RuntimeStats stats = runtime_summary({7.26});
        CHECK(stats.mean == 7.26);
        CHECK(stats.median == 7.26);
        CHECK(stats.std_dev == 0.0);
        CHECK(stats.n == 1);
    }
    SUBCASE("even count") {
        const RuntimeStats stats = runtime_summary({1, 2, 3, 4});
        CHECK(stats.mean == 2.5);
        CHECK(stats.median == 2.5);
    }
    SUBCASE("reported timing flavor") {
        const std::vector<double> times{6.59, 7.26, 9.18, 8.01, 7.13};
        const RuntimeStats stats = runtime_summary(times);
        CHECK(stats.median == 7.26);
        CHECK(stats.mean == doctest::Approx(7.634).epsilon(1e-12));
        CHECK(stats.mean == oracles::sum_mean(times));
        CHECK(stats.median == oracles::sort_median(times));
    }
    SUBCASE("random lists, exact agreement") {
        std::mt19937 rng(31415);
        std::uniform_real_distribution<double> value(0.0, 20.0);
        std::uniform_int_distribution<int> length(1, 200);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> times;
            for (int i = length(rng); i > 0; --i) times.push_back(value(rng));
            const RuntimeStats stats = runtime_summary(times, 10);
            CHECK(stats.mean == oracles::sum_mean(times));
            CHECK(stats.median == oracles::sort_median(times));
            std::uint64_t total = 0;
            for (const auto c : stats.bin_counts) total += c;
            CHECK(total == times.size());
        }
    }
    SUBCASE("histogram shape") {
        const RuntimeStats stats = runtime_summary({0.0, 0.5, 1.0, 10.0}, 10);
        CHECK(stats.bin_edges.size() == 11);
        CHECK(stats.bin_edges.front() == 0.0);
        CHECK(stats.bin_edges.back() == 10.0);
        CHECK(stats.bin_counts[9] == 1); // max lands in the last bin
        CHECK(stats.bin_counts[0] == 2); // [0, 1): the samples 0.0 and 0.5
        CHECK(stats.bin_counts[1] == 1); // [1, 2): the sample 1.0
    }
    SUBCASE("degenerate range") {
        const RuntimeStats stats = runtime_summary({3.0, 3.0, 3.0}, 4);
        CHECK(stats.bin_counts[3] == 3);
        CHECK(stats.std_dev == 0.0);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS((void)runtime_summary({}), Error);
    }
}

TEST_CASE("gaussian_pdf values and mass") {
    CHECK(gaussian_pdf(3.0, 3.0, 1.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    SUBCASE("symmetry") {
        // exactly representable offsets so mu +- d round-trips bit-exactly
        for (double d = 0.25; d < 5.0; d += 0.25)
            CHECK(gaussian_pdf(2.0 + d, 2.0, 1.7) == gaussian_pdf(2.0 - d, 2.0, 1.7));
    }
    SUBCASE("unit mass by quadrature") {
        const double mu = 7.26, sigma = 1.3;
        const double mass = oracles::trapezoid(
            [&](double x) { return gaussian_pdf(x, mu, sigma); }, mu - 8 * sigma, mu + 8 * sigma,
            100000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("invalid sigma") {
        CHECK_THROWS_AS((void)gaussian_pdf(0.0, 0.0, 0.0), Error);
    }
}
