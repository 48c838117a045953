#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "platebench/metrics.hpp"
#include "platebench/stats.hpp"

namespace platebench {

/// Everything measured for one pipeline arm. All summary numbers are
/// recomputable from `records`; emit/verify rely on that.
struct RunReport {
    std::string pipeline;
    std::string backend;
    std::vector<EvalRecord> records;
    ConfusionCounts counts;
    MetricsSummary summary;
    RuntimeStats preprocess_stats;
    RuntimeStats ocr_stats;
    RuntimeStats total_stats;
    std::optional<RocCurve> roc;
    std::optional<std::string> roc_notice; // e.g. "AUC undefined (single class)"
};

struct ComparisonReport {
    std::vector<RunReport> runs; // row order == input pipeline order
    std::optional<AnovaResult> anova_accuracy; // groups: per-image 0/1 correctness
    std::optional<std::string> anova_accuracy_notice;
    std::optional<AnovaResult> anova_timing; // groups: per-image total elapsed
    std::optional<std::string> anova_timing_notice;
};

struct SummaryRow {
    std::string preprocessing;
    MetricsSummary metrics;
};

std::vector<SummaryRow> table_rows(const RunReport& report);
std::vector<SummaryRow> table_rows(const ComparisonReport& report);

/// "0.7175" -> "71.75%".
std::string format_percent(double fraction);

/// Fixed-width text table with columns exactly
/// Preprocessing, Accuracy, Precision, Recall, F1-Score.
std::string summary_table_text(const std::vector<SummaryRow>& rows);

/// CSV twin, header exactly `preprocessing,accuracy,precision,recall,f1`,
/// metrics as raw fractions in shortest round-trip form.
std::string summary_table_csv(const std::vector<SummaryRow>& rows);

/// UTF-8 JSON with stable key order (schema documented in the README).
/// Doubles are written in shortest round-trip form, so re-reading and
/// recomputing the summaries from the records reproduces them exactly.
void emit_json_report(const RunReport& report, const std::filesystem::path& path);
void emit_json_report(const ComparisonReport& report, const std::filesystem::path& path);

using LoadedReport = std::variant<RunReport, ComparisonReport>;

/// Parses a report JSON file back, throwing Error{Schema} on any shape the
/// emitter would not produce.
LoadedReport load_report(const std::filesystem::path& path);

/// Deterministic standalone SVG 1.1 plots (800x600 viewBox):
///   roc*.svg          ROC polyline, diagonal reference, AUC label
///                     (or a single-class placeholder),
///   mean_median.svg   mean vs median bar pair per pipeline,
///   hist*.svg         total-runtime histogram with the Gaussian density
///                     scaled by n * bin width (omitted when sigma == 0).
/// Returns the files written.
std::vector<std::filesystem::path> render_plots(const RunReport& report,
                                                const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> render_plots(const ComparisonReport& report,
                                                const std::filesystem::path& out_dir);

/// Recomputes every derived number in a stored report from its records and
/// compares exactly. Returns the JSON paths of mismatching fields, empty
/// when the report is intact.
std::vector<std::string> verify_report(const LoadedReport& report);

} // namespace platebench
