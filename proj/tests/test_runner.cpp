#include <doctest.h>

#include <fstream>

#include "platebench/error.hpp"
#include "platebench/runner.hpp"
#include "platebench/subprocess.hpp"
#include "platebench/synth.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace platebench;

namespace {

std::filesystem::path make_dataset(const testutil::TempDir& dir, int count, double sigma,
                                   std::uint64_t seed) {
    PlateSpec spec;
    spec.format = PlateFormat::Mercosul;
    PerturbParams params;
    params.noise_sigma = sigma;
    return generate_dataset(count, spec, params, seed, dir.path());
}

#ifdef PLATEBENCH_CLI_PATH
struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const CommandResult r = run_command(std::string(PLATEBENCH_CLI_PATH) + " " + args,
                                        std::chrono::duration<double>(120.0));
    return {r.exit_code, r.output};
}
#endif

} // namespace

TEST_CASE("manifest parsing") {
    testutil::TempDir dir("manifest");

    SUBCASE("round-trips a generated dataset") {
        const auto manifest = make_dataset(dir, 3, 0.0, 5);
        const auto entries = read_manifest(manifest);
        REQUIRE(entries.size() == 3);
        CHECK(entries[0].image == "plate_00000.ppm");
        CHECK(classify_format(entries[0].plate) == PlateFormat::Mercosul);
    }
    SUBCASE("header must match exactly") {
        testutil::write_bytes(dir.file("bad.csv"), "image;plate\nx.ppm,ABC1234\n");
        CHECK_THROWS_AS((void)read_manifest(dir.file("bad.csv")), Error);
    }
    SUBCASE("rows must have two fields") {
        testutil::write_bytes(dir.file("short.csv"), "image,plate\nx.ppm\n");
        CHECK_THROWS_AS((void)read_manifest(dir.file("short.csv")), Error);
    }
    SUBCASE("crlf is tolerated") {
        testutil::write_bytes(dir.file("crlf.csv"), "image,plate\r\nx.ppm,abc-1234\r\n");
        const auto entries = read_manifest(dir.file("crlf.csv"));
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].plate == "ABC1234");
    }
}

TEST_CASE("run_benchmark with the builtin backend on clean plates") {
    testutil::TempDir dir("clean-run");
    RunConfig config;
    config.manifest = make_dataset(dir, 6, 0.0, 21);
    config.pipeline_text = "";
    config.backend.kind = BackendKind::Builtin;

    const RunReport report = run_benchmark(config);
    CHECK(report.summary.accuracy == 1.0);
    CHECK(report.counts.tp == 6);
    CHECK_FALSE(has_failures(report));
    CHECK(report.pipeline == "none");
    // empty pipeline: no stages, so no preprocessing time was spent
    for (const EvalRecord& record : report.records) CHECK(record.preprocess_elapsed == 0.0);
    // all-correct run with constant confidence has a single class
    CHECK_FALSE(report.roc.has_value());
    REQUIRE(report.roc_notice.has_value());
    CHECK(*report.roc_notice == "AUC undefined (single class)");
}

TEST_CASE("run_benchmark with the mock backend") {
    testutil::TempDir dir("mock-run");
    RunConfig config;
    config.manifest = make_dataset(dir, 10, 0.0, 3);
    config.backend.kind = BackendKind::Mock;
    config.backend.error_rate = 0.0;
    config.backend.seed = 9;

    SUBCASE("zero error rate scores everything correct") {
        const RunReport report = run_benchmark(config);
        CHECK(report.summary.accuracy == 1.0);
        CHECK(summary_table_text(table_rows(report)).find("100.00%") != std::string::npos);
    }
    SUBCASE("worker count does not change non-timing outputs") {
        config.backend.error_rate = 0.4;
        RunConfig wide = config;
        wide.workers = 8;
        const RunReport a = run_benchmark(config);
        const RunReport b = run_benchmark(wide);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].image_id == b.records[i].image_id);
            CHECK(a.records[i].prediction.raw_text == b.records[i].prediction.raw_text);
            CHECK(a.records[i].correct == b.records[i].correct);
        }
        CHECK(a.summary == b.summary);
        CHECK(a.counts == b.counts);
        REQUIRE(a.roc.has_value() == b.roc.has_value());
        if (a.roc) CHECK(a.roc->auc == b.roc->auc);
    }
}

TEST_CASE("missing images are recorded as failures and the run completes") {
    testutil::TempDir dir("missing");
    const auto manifest = make_dataset(dir, 2, 0.0, 8);
    std::ofstream append(manifest, std::ios::app);
    append << "not_there.ppm,ZZZ9999\n";
    append.close();

    RunConfig config;
    config.manifest = manifest;
    config.backend.kind = BackendKind::Builtin;
    const RunReport report = run_benchmark(config);
    REQUIRE(report.records.size() == 3);
    CHECK(has_failures(report));
    REQUIRE(report.records[2].failure.has_value());
    CHECK_FALSE(report.records[2].correct);
    CHECK(report.counts.tp == 2);
}

TEST_CASE("compare_benchmark") {
    testutil::TempDir dir("compare");

    SUBCASE("two identical arms on clean data surface the ANOVA notice") {
        RunConfig base;
        base.manifest = make_dataset(dir, 4, 0.0, 17);
        base.backend.kind = BackendKind::Builtin;
        const ComparisonReport report =
            compare_benchmark(base, {"", "bilateral(radius=2,sspace=2,srange=40)"});
        REQUIRE(report.runs.size() == 2);
        CHECK_FALSE(report.anova_accuracy.has_value());
        REQUIRE(report.anova_accuracy_notice.has_value());
        CHECK(*report.anova_accuracy_notice ==
              "ANOVA not applicable: zero within-group variance");
        // timings always vary, so the timing ANOVA exists
        CHECK(report.anova_timing.has_value());
    }
    SUBCASE("four arms keep their order in the table") {
        RunConfig base;
        base.manifest = make_dataset(dir, 3, 10.0, 23);
        base.backend.kind = BackendKind::Builtin;
        const ComparisonReport report = compare_benchmark(
            base, {"none", "grayscale", "clahe_rgb(tiles=2x2)", "bilateral(radius=1)"});
        const auto rows = table_rows(report);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0].preprocessing == "none");
        CHECK(rows[1].preprocessing == "grayscale");
        CHECK(rows[2].preprocessing == "clahe_rgb(tiles=2x2)");
        CHECK(rows[3].preprocessing == "bilateral(radius=1)");
    }
    SUBCASE("accuracy ANOVA agrees with the textbook oracle on emitted groups") {
        RunConfig base;
        base.manifest = make_dataset(dir, 12, 45.0, 29);
        base.backend.kind = BackendKind::Builtin;
        const ComparisonReport report =
            compare_benchmark(base, {"none", "bilateral(radius=2,sspace=2,srange=40)"});
        std::vector<std::vector<double>> groups;
        for (const RunReport& run : report.runs) {
            std::vector<double> g;
            for (const EvalRecord& r : run.records) g.push_back(r.correct ? 1.0 : 0.0);
            groups.push_back(std::move(g));
        }
        if (report.anova_accuracy) {
            const auto oracle = oracles::anova_textbook(groups);
            CHECK(report.anova_accuracy->f_value == doctest::Approx(oracle.f).epsilon(1e-12));
            CHECK(report.anova_accuracy->f_value > 0.0);
        } else {
            // both arms uniform; nothing to compare
            CHECK(report.anova_accuracy_notice.has_value());
        }
    }
    SUBCASE("fewer than two arms or duplicates are usage errors") {
        RunConfig base;
        base.manifest = make_dataset(dir, 2, 0.0, 31);
        CHECK_THROWS_AS((void)compare_benchmark(base, {"none"}), Error);
        CHECK_THROWS_AS((void)compare_benchmark(base, {"none", ""}), Error);
    }
}

#ifdef PLATEBENCH_CLI_PATH
TEST_CASE("cli end to end") {
    testutil::TempDir dir("cli");
    const std::string out = (dir.path() / "out").string();
    const std::string data = (dir.path() / "data").string();

    SUBCASE("synth, run, verify") {
        const CliResult synth =
            run_cli("synth --count 5 --format mercosul --seed 7 --out " + data);
        CHECK(synth.exit_code == 0);
        CHECK(synth.output.find("manifest.csv") != std::string::npos);

        const CliResult run = run_cli("run --manifest " + data + "/manifest.csv --out " + out);
        CHECK(run.exit_code == 0);
        CHECK(run.output.find("Preprocessing") != std::string::npos);
        CHECK(run.output.find("100.00%") != std::string::npos);

        const CliResult verify = run_cli("verify --report " + out + "/run.json");
        CHECK(verify.exit_code == 0);
        CHECK(verify.output.find("OK") != std::string::npos);
    }
    SUBCASE("synth determinism across reruns") {
        const std::string data2 = (dir.path() / "data2").string();
        CHECK(run_cli("synth --count 4 --format mercosul --seed 9 --out " + data).exit_code == 0);
        CHECK(run_cli("synth --count 4 --format mercosul --seed 9 --out " + data2).exit_code == 0);
        for (const auto& entry : std::filesystem::directory_iterator(data)) {
            const auto name = entry.path().filename();
            CHECK(testutil::read_bytes(entry.path()) ==
                  testutil::read_bytes(std::filesystem::path(data2) / name));
        }
    }
    SUBCASE("usage errors exit with 1") {
        CHECK(run_cli("synth --count 0 --seed 1 --out " + data).exit_code == 1);
        CHECK(run_cli("synth --count 3 --out " + data).exit_code == 1); // seed required
        CHECK(run_cli("run --manifest /nonexistent.csv").exit_code == 1);
        CHECK(run_cli("run").exit_code == 1);
        CHECK(run_cli("verify --report /nonexistent.json").exit_code == 1);
        CHECK(run_cli("nonsense").exit_code == 1);
    }
    SUBCASE("mock backend without seed is a usage error") {
        run_cli("synth --count 2 --format oldbrazil --seed 4 --out " + data);
        const CliResult r = run_cli("run --manifest " + data + "/manifest.csv --backend mock");
        CHECK(r.exit_code == 1);
    }
    SUBCASE("backend failures exit with 2 but the run completes") {
        run_cli("synth --count 2 --format oldbrazil --seed 4 --out " + data);
        std::ofstream append(std::filesystem::path(data) / "manifest.csv", std::ios::app);
        append << "ghost.ppm,AAA1111\n";
        append.close();
        const CliResult r =
            run_cli("run --manifest " + data + "/manifest.csv --out " + out);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("failure") != std::string::npos);
    }
    SUBCASE("tampered report is rejected with the field path") {
        run_cli("synth --count 3 --format mercosul --seed 11 --out " + data);
        run_cli("run --manifest " + data + "/manifest.csv --out " + out);
        std::string raw = testutil::read_bytes(std::filesystem::path(out) / "run.json");
        const std::size_t pos = raw.find("\"accuracy\": 1.0");
        REQUIRE(pos != std::string::npos);
        raw.replace(pos, std::string("\"accuracy\": 1.0").size(), "\"accuracy\": 0.5");
        testutil::write_bytes(std::filesystem::path(out) / "run.json", raw);
        const CliResult r = run_cli("verify --report " + out + "/run.json");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("summary.accuracy") != std::string::npos);
    }
    SUBCASE("compare emits the four-arm table and reports verify") {
        run_cli("synth --count 4 --format mercosul --seed 13 --noise-sigma 20 --out " + data);
        const CliResult r = run_cli(
            "compare --manifest " + data + "/manifest.csv --pipeline none --pipeline grayscale "
            "--pipeline clahe_rgb --pipeline 'bilateral(radius=1)' --out " + out);
        CHECK((r.exit_code == 0 || r.exit_code == 2));
        CHECK(r.output.find("Preprocessing") != std::string::npos);
        CHECK(run_cli("verify --report " + out + "/comparison.json").exit_code == 0);
        CHECK(run_cli("verify --report " + out + "/run_0.json").exit_code == 0);
        // report re-rendering from the stored file is deterministic
        const std::string replot = (dir.path() / "replot").string();
        CHECK(run_cli("report --report " + out + "/comparison.json --out " + replot).exit_code ==
              0);
        CHECK(testutil::read_bytes(std::filesystem::path(replot) / "mean_median.svg") ==
              testutil::read_bytes(std::filesystem::path(out) / "mean_median.svg"));
    }
}
#endif // PLATEBENCH_CLI_PATH
