#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "platebench/error.hpp"
#include "platebench/log.hpp"
#include "platebench/report.hpp"
#include "platebench/runner.hpp"
#include "platebench/synth.hpp"

namespace fs = std::filesystem;
using namespace platebench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBackendFailures = 2;

struct CommonOptions {
    std::string manifest;
    std::vector<std::string> pipelines;
    std::string backend = "builtin";
    std::string backend_cmd;
    double error_rate = 0.0;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    double timeout_secs = 60.0;
    std::size_t bins = 10;
    std::string out = ".";
};

void add_run_options(CLI::App* cmd, CommonOptions& opts, bool repeat_pipeline) {
    cmd->add_option("--manifest", opts.manifest, "dataset manifest CSV")->required();
    if (repeat_pipeline)
        cmd->add_option("--pipeline", opts.pipelines, "preprocessing pipeline (repeatable)")
            ->required();
    else
        cmd->add_option("--pipeline", opts.pipelines, "preprocessing pipeline")
            ->expected(0, 1);
    cmd->add_option("--backend", opts.backend, "recognizer backend")
        ->check(CLI::IsMember({"mock", "builtin", "external"}));
    cmd->add_option("--backend-cmd", opts.backend_cmd,
                    "external backend command template with {in}");
    cmd->add_option("--error-rate", opts.error_rate, "mock backend error rate in [0,1]");
    cmd->add_option("--seed", opts.seed, "seed for the mock backend");
    cmd->add_option("--workers", opts.workers, "image-level worker count")->check(CLI::PositiveNumber);
    cmd->add_option("--timeout-secs", opts.timeout_secs, "external backend timeout");
    cmd->add_option("--bins", opts.bins, "runtime histogram bin count")->check(CLI::PositiveNumber);
    cmd->add_option("--out", opts.out, "output directory for reports and plots");
}

RecognizerConfig backend_config(const CommonOptions& opts) {
    RecognizerConfig config;
    if (opts.backend == "mock") {
        config.kind = BackendKind::Mock;
        if (!opts.seed)
            throw Error(ErrorKind::Config,
                        "the mock backend requires --seed (no hidden entropy)");
        if (opts.error_rate < 0.0 || opts.error_rate > 1.0)
            throw Error(ErrorKind::Config, "--error-rate must be in [0, 1]");
        config.error_rate = opts.error_rate;
        config.seed = *opts.seed;
    } else if (opts.backend == "external") {
        config.kind = BackendKind::External;
        if (opts.backend_cmd.empty())
            throw Error(ErrorKind::Config, "--backend external requires --backend-cmd");
        if (opts.backend_cmd.find("{in}") == std::string::npos)
            throw Error(ErrorKind::Config, "--backend-cmd must contain the {in} placeholder");
        config.command_template = opts.backend_cmd;
        config.timeout_seconds = opts.timeout_secs;
    } else {
        config.kind = BackendKind::Builtin;
    }
    return config;
}

void print_run_notices(const RunReport& report, bool name_arm = false) {
    const std::string prefix = name_arm ? report.pipeline + ": " : "";
    if (report.roc_notice) std::cout << prefix << *report.roc_notice << "\n";
    for (const EvalRecord& record : report.records)
        if (record.failure)
            std::cout << prefix << "failure: " << record.image_id << ": " << *record.failure
                      << "\n";
}

int cmd_run(const CommonOptions& opts) {
    RunConfig config;
    config.manifest = opts.manifest;
    config.pipeline_text = opts.pipelines.empty() ? "" : opts.pipelines.front();
    config.backend = backend_config(opts);
    config.workers = opts.workers;
    config.bin_count = opts.bins;

    const RunReport report = run_benchmark(config);
    const fs::path out_dir(opts.out);
    fs::create_directories(out_dir);
    emit_json_report(report, out_dir / "run.json");
    render_plots(report, out_dir);
    const auto rows = table_rows(report);
    {
        const std::string csv = summary_table_csv(rows);
        std::ofstream csv_out(out_dir / "summary.csv", std::ios::binary | std::ios::trunc);
        csv_out << csv;
    }
    std::cout << summary_table_text(rows);
    print_run_notices(report);
    std::cout << "report: " << (out_dir / "run.json").string() << "\n";
    return has_failures(report) ? kExitBackendFailures : kExitOk;
}

int cmd_compare(const CommonOptions& opts) {
    RunConfig base;
    base.manifest = opts.manifest;
    base.backend = backend_config(opts);
    base.workers = opts.workers;
    base.bin_count = opts.bins;

    const ComparisonReport report = compare_benchmark(base, opts.pipelines);
    const fs::path out_dir(opts.out);
    fs::create_directories(out_dir);
    emit_json_report(report, out_dir / "comparison.json");
    for (std::size_t i = 0; i < report.runs.size(); ++i)
        emit_json_report(report.runs[i], out_dir / ("run_" + std::to_string(i) + ".json"));
    render_plots(report, out_dir);

    const auto rows = table_rows(report);
    {
        const std::string csv = summary_table_csv(rows);
        std::ofstream csv_out(out_dir / "summary.csv", std::ios::binary | std::ios::trunc);
        csv_out << csv;
    }
    std::cout << summary_table_text(rows);
    if (report.anova_accuracy) {
        std::cout << "accuracy ANOVA: F = " << report.anova_accuracy->f_value
                  << ", p = " << report.anova_accuracy->p_value << "\n";
    } else if (report.anova_accuracy_notice) {
        std::cout << "accuracy " << *report.anova_accuracy_notice << "\n";
    }
    if (report.anova_timing) {
        std::cout << "timing ANOVA: F = " << report.anova_timing->f_value
                  << ", p = " << report.anova_timing->p_value << "\n";
    } else if (report.anova_timing_notice) {
        std::cout << "timing " << *report.anova_timing_notice << "\n";
    }
    bool failures = false;
    for (const RunReport& run : report.runs) {
        print_run_notices(run, true);
        failures = failures || has_failures(run);
    }
    std::cout << "report: " << (out_dir / "comparison.json").string() << "\n";
    return failures ? kExitBackendFailures : kExitOk;
}

int cmd_synth(std::uint64_t count, const std::string& format, double noise_sigma,
              double brightness_slope, double contrast, int glyph_scale, int padding,
              std::optional<std::uint64_t> seed, const std::string& out) {
    if (!seed)
        throw Error(ErrorKind::Config, "synth requires --seed (no hidden entropy)");
    if (count < 1)
        throw Error(ErrorKind::Config, "--count must be >= 1");

    PlateSpec spec;
    if (format == "oldbrazil")
        spec.format = PlateFormat::OldBrazil;
    else if (format == "mercosul")
        spec.format = PlateFormat::Mercosul;
    else
        throw Error(ErrorKind::Config, "--format must be oldbrazil or mercosul");
    spec.glyph_scale = glyph_scale;
    spec.padding = padding;

    PerturbParams params;
    params.noise_sigma = noise_sigma;
    params.brightness_slope = brightness_slope;
    params.contrast = contrast;

    const fs::path manifest = generate_dataset(count, spec, params, *seed, out);
    std::cout << manifest.string() << "\n";
    return kExitOk;
}

int cmd_report(const std::string& report_path, const std::string& out) {
    const LoadedReport loaded = load_report(report_path);
    const fs::path out_dir(out);
    fs::create_directories(out_dir);
    std::vector<SummaryRow> rows;
    if (const auto* run = std::get_if<RunReport>(&loaded)) {
        rows = table_rows(*run);
        render_plots(*run, out_dir);
    } else {
        const auto& comparison = std::get<ComparisonReport>(loaded);
        rows = table_rows(comparison);
        render_plots(comparison, out_dir);
    }
    {
        const std::string csv = summary_table_csv(rows);
        std::ofstream csv_out(out_dir / "summary.csv", std::ios::binary | std::ios::trunc);
        csv_out << csv;
    }
    std::cout << summary_table_text(rows);
    return kExitOk;
}

int cmd_verify(const std::string& report_path) {
    if (!fs::exists(report_path)) {
        std::cerr << "verify: report file not found: " << report_path << "\n";
        return kExitUsage;
    }
    const LoadedReport loaded = load_report(report_path);
    const std::vector<std::string> mismatches = verify_report(loaded);
    if (mismatches.empty()) {
        std::cout << "verify: OK (" << report_path << ")\n";
        return kExitOk;
    }
    for (const std::string& path : mismatches)
        std::cout << "verify: mismatch at " << path << "\n";
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"License-plate OCR preprocessing benchmark"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "evaluate one pipeline over a manifest");
    add_run_options(run, run_opts, false);

    CommonOptions compare_opts;
    CLI::App* compare = app.add_subcommand("compare", "evaluate several pipeline arms");
    add_run_options(compare, compare_opts, true);

    std::uint64_t synth_count = 0;
    std::string synth_format = "mercosul";
    double synth_sigma = 0.0, synth_slope = 0.0, synth_contrast = 1.0;
    int synth_scale = 4, synth_padding = 6;
    std::optional<std::uint64_t> synth_seed;
    std::string synth_out = ".";
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic plate dataset");
    synth->add_option("--count", synth_count, "number of plates")->required();
    synth->add_option("--format", synth_format, "plate format: oldbrazil|mercosul");
    synth->add_option("--noise-sigma", synth_sigma, "Gaussian noise std");
    synth->add_option("--brightness-slope", synth_slope, "per-column brightness gradient");
    synth->add_option("--contrast", synth_contrast, "contrast factor in (0,1]");
    synth->add_option("--glyph-scale", synth_scale, "font cell scale (>= 2)");
    synth->add_option("--padding", synth_padding, "border padding in pixels");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output directory");

    std::string report_path, report_out = ".";
    CLI::App* report = app.add_subcommand("report", "re-render table and plots from a report");
    report->add_option("--report", report_path, "stored JSON report")->required();
    report->add_option("--out", report_out, "output directory");

    std::string verify_path;
    CLI::App* verify = app.add_subcommand("verify", "recompute a stored report and compare");
    verify->add_option("--report", verify_path, "stored JSON report")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (compare->parsed()) return cmd_compare(compare_opts);
        if (synth->parsed())
            return cmd_synth(synth_count, synth_format, synth_sigma, synth_slope, synth_contrast,
                             synth_scale, synth_padding, synth_seed, synth_out);
        if (report->parsed()) return cmd_report(report_path, report_out);
        if (verify->parsed()) return cmd_verify(verify_path);
    } catch (const Error& e) {
        std::cerr << "platebench: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "platebench: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
