#include "platebench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "platebench/error.hpp"
#include "platebench/log.hpp"
#include "platebench/preprocess.hpp"
#include "platebench/stats.hpp"

namespace platebench {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot read manifest " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::Malformed, "empty manifest " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "image,plate")
        throw Error(ErrorKind::Malformed,
                    "manifest header must be exactly \"image,plate\", got \"" + line + "\"");

    std::vector<ManifestEntry> entries;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size())
            throw Error(ErrorKind::Malformed, "manifest line " + std::to_string(line_no) +
                                                  " is not \"image,plate\": \"" + line + "\"");
        ManifestEntry entry;
        entry.image = line.substr(0, comma);
        entry.plate = normalize_plate(line.substr(comma + 1));
        entries.push_back(std::move(entry));
    }
    if (entries.empty())
        throw Error(ErrorKind::Malformed, "manifest has no rows: " + path.string());
    return entries;
}

namespace {

// Index-pulling worker pool; results land at their own index, so output
// order is the manifest order no matter which worker finishes first.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int n_threads = std::min<int>(workers, static_cast<int>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& thread : pool) thread.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

RunReport run_benchmark(const RunConfig& config) {
    if (config.workers < 1)
        throw Error(ErrorKind::Config, "worker count must be >= 1");
    if (config.backend.kind == BackendKind::Mock &&
        (config.backend.error_rate < 0.0 || config.backend.error_rate > 1.0))
        throw Error(ErrorKind::Config, "mock error_rate must be in [0, 1]");

    const std::vector<ManifestEntry> entries = read_manifest(config.manifest);
    const PipelineSpec pipeline = parse_pipeline(config.pipeline_text);
    const std::filesystem::path base_dir = config.manifest.parent_path();

    RunReport report;
    report.pipeline = pipeline.name;
    report.backend = config.backend.describe();
    report.records.resize(entries.size());

    parallel_for(entries.size(), config.workers, [&](std::size_t i) {
        const ManifestEntry& entry = entries[i];
        EvalRecord& record = report.records[i];
        record.image_id = entry.image;
        record.truth = entry.plate;
        try {
            const Image raw = load_image(base_dir / entry.image);
            auto [processed, timings] = apply_pipeline(raw, pipeline);
            for (const StageTiming& timing : timings)
                record.preprocess_elapsed += timing.elapsed_seconds;

            const RecognizeOutcome outcome =
                recognize(processed, config.backend, i, entry.plate);
            record.prediction = outcome.prediction;
            record.ocr_elapsed = outcome.prediction.elapsed_seconds;
            record.failure = outcome.failure;
        } catch (const std::exception& e) {
            // Unreadable or undecodable image: scored incorrect, run goes on.
            record.prediction = Prediction{};
            record.failure = e.what();
            log_error("image " + entry.image + ": " + e.what());
        }
        try {
            record.correct = normalize_plate(record.prediction.raw_text) == record.truth;
        } catch (const Error&) {
            record.correct = false;
        }
    });

    std::vector<double> preprocess_times, ocr_times, total_times;
    std::vector<std::pair<double, bool>> scored;
    for (const EvalRecord& record : report.records) {
        if (record.correct)
            ++report.counts.tp;
        else {
            ++report.counts.fp;
            ++report.counts.fn;
        }
        preprocess_times.push_back(record.preprocess_elapsed);
        ocr_times.push_back(record.ocr_elapsed);
        total_times.push_back(record.preprocess_elapsed + record.ocr_elapsed);
        scored.emplace_back(record.prediction.confidence, record.correct);
    }
    report.summary = summarize(report.counts);
    report.preprocess_stats = runtime_summary(preprocess_times, config.bin_count);
    report.ocr_stats = runtime_summary(ocr_times, config.bin_count);
    report.total_stats = runtime_summary(total_times, config.bin_count);
    try {
        report.roc = roc_curve(scored);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingleClassRoc) throw;
        report.roc_notice = "AUC undefined (single class)";
    }
    return report;
}

ComparisonReport compare_benchmark(const RunConfig& base,
                                   const std::vector<std::string>& pipeline_texts) {
    if (pipeline_texts.size() < 2)
        throw Error(ErrorKind::Config, "compare needs at least two pipeline arms");
    std::set<std::string> names;
    for (const std::string& text : pipeline_texts) {
        if (!names.insert(parse_pipeline(text).name).second)
            throw Error(ErrorKind::Config,
                        "duplicate pipeline arm \"" + parse_pipeline(text).name + "\"");
    }

    ComparisonReport report;
    for (const std::string& text : pipeline_texts) {
        RunConfig arm = base;
        arm.pipeline_text = text;
        log_info("running arm: " + parse_pipeline(text).name);
        report.runs.push_back(run_benchmark(arm));
    }

    AnovaInput accuracy_groups;
    AnovaInput timing_groups;
    for (const RunReport& run : report.runs) {
        std::vector<double> correctness, totals;
        for (const EvalRecord& record : run.records) {
            correctness.push_back(record.correct ? 1.0 : 0.0);
            totals.push_back(record.preprocess_elapsed + record.ocr_elapsed);
        }
        accuracy_groups.groups.push_back(std::move(correctness));
        timing_groups.groups.push_back(std::move(totals));
    }
    try {
        report.anova_accuracy = anova_oneway(accuracy_groups);
    } catch (const Error& e) {
        report.anova_accuracy_notice = e.kind() == ErrorKind::ZeroWithinVariance
                                           ? "ANOVA not applicable: zero within-group variance"
                                           : std::string("ANOVA not applicable: ") + e.what();
    }
    try {
        report.anova_timing = anova_oneway(timing_groups);
    } catch (const Error& e) {
        report.anova_timing_notice = e.kind() == ErrorKind::ZeroWithinVariance
                                         ? "ANOVA not applicable: zero within-group variance"
                                         : std::string("ANOVA not applicable: ") + e.what();
    }
    return report;
}

bool has_failures(const RunReport& report) {
    return std::any_of(report.records.begin(), report.records.end(),
                       [](const EvalRecord& r) { return r.failure.has_value(); });
}

} // namespace platebench
