#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "platebench/ocr.hpp"
#include "platebench/report.hpp"

namespace platebench {

struct ManifestEntry {
    std::string image;      // path relative to the manifest
    std::string plate;      // canonical ground truth
};

/// Reads a dataset manifest: UTF-8 CSV, header exactly "image,plate", one
/// row per image. Plate texts are normalized on load.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct RunConfig {
    std::filesystem::path manifest;
    std::string pipeline_text;
    RecognizerConfig backend;
    int workers = 1;
    std::size_t bin_count = 10;
};

/// Evaluates one pipeline arm over the manifest: per image
/// load -> apply_pipeline (timed) -> recognize (timed) -> EvalRecord, then
/// metrics, runtime summaries and the ROC sweep. Per-image failures (missing
/// files, backend errors) are recorded and scored as incorrect; the run
/// always completes. Images are processed by `workers` threads; record order
/// follows the manifest regardless of completion order.
RunReport run_benchmark(const RunConfig& config);

/// Runs every arm over the same manifest and backend, then the two ANOVA
/// analyses: per-image correctness (0/1) groups and per-image total elapsed
/// time groups. Inapplicable ANOVA (zero within-group variance) becomes a
/// notice instead of a result. Requires >= 2 arms with distinct names.
ComparisonReport compare_benchmark(const RunConfig& base,
                                   const std::vector<std::string>& pipeline_texts);

bool has_failures(const RunReport& report);

} // namespace platebench
