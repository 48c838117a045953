#include <doctest.h>

#include <random>

#include "platebench/error.hpp"
#include "platebench/metrics.hpp"

#include "oracles.hpp"

using namespace platebench;

namespace {

Prediction pred(const std::string& text, double confidence = 0.5) {
    Prediction p;
    p.raw_text = text;
    p.confidence = confidence;
    return p;
}

} // namespace

TEST_CASE("normalize_plate strips separators and uppercases") {
    CHECK(normalize_plate("abc-1234") == "ABC1234");
    CHECK(normalize_plate(" aBc 1d23 ") == "ABC1D23");
    CHECK(normalize_plate("AB.C:12/34") == "ABC1234");
    try {
        (void)normalize_plate("---");
        FAIL("expected empty-plate error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyPlate);
    }
}

TEST_CASE("normalize_plate is idempotent") {
    std::mt19937 rng(8);
    const std::string pool = "abcXYZ019 -._#\tz";
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> length(1, 12);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        std::string raw;
        for (int k = length(rng); k > 0; --k) raw += pool[pick(rng)];
        try {
            const std::string once = normalize_plate(raw);
            CHECK(normalize_plate(once) == once);
            ++checked;
        } catch (const Error&) {
            // nothing alphanumeric in this sample
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("classify_format recognizes the two Brazilian layouts") {
    CHECK(classify_format("ABC1234") == PlateFormat::OldBrazil);
    CHECK(classify_format("ABC1D23") == PlateFormat::Mercosul);
    CHECK(classify_format("AB12345") == PlateFormat::Other);
    CHECK(classify_format("ABCD123") == PlateFormat::Other);
    CHECK(classify_format("ABC12345") == PlateFormat::Other);
}

TEST_CASE("evaluate produces the exact-match counting regime") {
    SUBCASE("717 of 1000") {
        std::vector<std::pair<std::string, Prediction>> records;
        for (int i = 0; i < 1000; ++i)
            records.emplace_back("ABC1234", pred(i < 717 ? "ABC1234" : "XYZ0000"));
        const EvalOutcome outcome = evaluate(records);
        CHECK(outcome.counts.tp == 717);
        CHECK(outcome.counts.fp == 283);
        CHECK(outcome.counts.fn == 283);
        CHECK(outcome.counts.tn == 0);
    }
    SUBCASE("all correct") {
        const EvalOutcome outcome = evaluate({{"AAA1111", pred("aaa-1111")}});
        CHECK(outcome.counts.tp == 1);
        CHECK(outcome.counts.fp == 0);
        CHECK(outcome.counts.fn == 0);
        CHECK(outcome.records[0].correct);
    }
    SUBCASE("all incorrect, including unnormalizable predictions") {
        const EvalOutcome outcome = evaluate({{"AAA1111", pred("???")}, {"AAA1111", pred("")}});
        CHECK(outcome.counts.tp == 0);
        CHECK(outcome.counts.fp == 2);
    }
    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS((void)evaluate({}), Error);
    }
    SUBCASE("non-canonical truth is rejected") {
        CHECK_THROWS_AS((void)evaluate({{"abc-1234", pred("ABC1234")}}), Error);
    }
}

TEST_CASE("summarize: exact-match identity and paper case") {
    SUBCASE("tp=717 over n=1000 gives 0.717 across the board") {
        const MetricsSummary s = summarize(ConfusionCounts{717, 0, 283, 283});
        CHECK(s.accuracy == 717.0 / 1000.0);
        CHECK(s.accuracy == s.precision);
        CHECK(s.accuracy == s.recall);
        CHECK(s.accuracy == s.f1);
    }
    SUBCASE("perfect run") {
        const MetricsSummary s = summarize(ConfusionCounts{5, 0, 0, 0});
        CHECK(s.accuracy == 1.0);
        CHECK(s.f1 == 1.0);
    }
    SUBCASE("3 of 4") {
        const MetricsSummary s = summarize(ConfusionCounts{3, 0, 1, 1});
        CHECK(s.accuracy == 0.75);
        CHECK(s.precision == 0.75);
        CHECK(s.recall == 0.75);
        CHECK(s.f1 == 0.75);
    }
    SUBCASE("all-zero counts are rejected") {
        CHECK_THROWS_AS((void)summarize(ConfusionCounts{}), Error);
    }
    SUBCASE("general counts use the textbook formulas") {
        const MetricsSummary s = summarize(ConfusionCounts{2, 3, 1, 4});
        CHECK(s.accuracy == 0.5);
        CHECK(s.precision == 2.0 / 3.0);
        CHECK(s.recall == 2.0 / 6.0);
        CHECK(s.f1 == 4.0 / 9.0);
    }
    SUBCASE("zero denominators fall back to 0") {
        const MetricsSummary s = summarize(ConfusionCounts{0, 4, 0, 0});
        CHECK(s.precision == 0.0);
        CHECK(s.recall == 0.0);
        CHECK(s.f1 == 0.0);
    }
}

TEST_CASE("summarize identity holds on randomized exact-match counts") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::uint64_t> n_dist(1, 5000);
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = n_dist(rng);
        const std::uint64_t tp = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
        const MetricsSummary s = summarize(ConfusionCounts{tp, 0, n - tp, n - tp});
        CHECK(s.accuracy == s.precision);
        CHECK(s.accuracy == s.recall);
        CHECK(s.accuracy == s.f1);
        CHECK(s.accuracy >= 0.0);
        CHECK(s.accuracy <= 1.0);
    }
}

TEST_CASE("summarize is scale-consistent") {
    std::mt19937 rng(18);
    std::uniform_int_distribution<std::uint64_t> c(0, 50);
    for (int i = 0; i < 200; ++i) {
        ConfusionCounts counts{c(rng), c(rng), c(rng), c(rng)};
        if (counts.total() == 0) counts.tp = 1;
        const std::uint64_t k = 1 + c(rng);
        const ConfusionCounts scaled{counts.tp * k, counts.tn * k, counts.fp * k, counts.fn * k};
        const MetricsSummary a = summarize(counts);
        const MetricsSummary b = summarize(scaled);
        CHECK(a.accuracy == b.accuracy);
        CHECK(a.precision == b.precision);
        CHECK(a.recall == b.recall);
        CHECK(a.f1 == b.f1);
    }
}

TEST_CASE("roc_curve geometry and AUC") {
    SUBCASE("perfect separation") {
        const RocCurve curve = roc_curve({{0.9, true}, {0.8, true}, {0.2, false}});
        CHECK(curve.auc == 1.0);
        REQUIRE(curve.points.front() == std::pair{0.0, 0.0});
        CHECK(curve.points.back() == std::pair{1.0, 1.0});
        // passes through (0, 1): every positive ranked before any negative
        bool through_top_left = false;
        for (const auto& [fpr, tpr] : curve.points)
            through_top_left = through_top_left || (fpr == 0.0 && tpr == 1.0);
        CHECK(through_top_left);
    }
    SUBCASE("complete tie") {
        CHECK(roc_curve({{0.5, true}, {0.5, false}}).auc == 0.5);
    }
    SUBCASE("single class errors carry the class") {
        try {
            (void)roc_curve({{0.5, true}, {0.6, true}});
            FAIL("expected degenerate roc error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SingleClassRoc);
            CHECK(std::string(e.what()).find("positive") != std::string::npos);
        }
        try {
            (void)roc_curve({{0.5, false}});
            FAIL("expected degenerate roc error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SingleClassRoc);
            CHECK(std::string(e.what()).find("negative") != std::string::npos);
        }
    }
    SUBCASE("monotone points") {
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> score(0.0, 1.0);
        std::bernoulli_distribution label(0.4);
        std::vector<std::pair<double, bool>> scored;
        for (int i = 0; i < 100; ++i) scored.emplace_back(score(rng), label(rng));
        scored.emplace_back(0.5, true);
        scored.emplace_back(0.5, false);
        const RocCurve curve = roc_curve(scored);
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].first >= curve.points[i - 1].first);
            CHECK(curve.points[i].second >= curve.points[i - 1].second);
        }
    }
}

TEST_CASE("trapezoidal AUC equals pair counting, ties included") {
    std::mt19937 rng(99);
    std::bernoulli_distribution label(0.5);
    // coarse scores force plenty of ties
    std::uniform_int_distribution<int> coarse(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, bool>> scored;
        bool pos = false, neg = false;
        for (int i = 0; i < 50; ++i) {
            const bool l = label(rng);
            pos = pos || l;
            neg = neg || !l;
            scored.emplace_back(coarse(rng) / 4.0, l);
        }
        if (!pos || !neg) continue;
        const double trapezoid = roc_curve(scored).auc;
        const double pairs = oracles::pair_count_auc(scored);
        CHECK(std::fabs(trapezoid - pairs) <= 1e-12);
    }
}
