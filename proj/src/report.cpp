#include "platebench/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "platebench/error.hpp"

namespace platebench {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string shortest(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

} // namespace

std::vector<SummaryRow> table_rows(const RunReport& report) {
    return {{report.pipeline, report.summary}};
}

std::vector<SummaryRow> table_rows(const ComparisonReport& report) {
    std::vector<SummaryRow> rows;
    rows.reserve(report.runs.size());
    for (const RunReport& run : report.runs) rows.push_back({run.pipeline, run.summary});
    return rows;
}

std::string format_percent(double fraction) {
    return fixed(fraction * 100.0, 2) + "%";
}

std::string summary_table_text(const std::vector<SummaryRow>& rows) {
    if (rows.empty())
        throw Error(ErrorKind::Precondition, "summary table needs at least one row");

    static constexpr const char* kHeaders[5] = {"Preprocessing", "Accuracy", "Precision",
                                                "Recall", "F1-Score"};
    std::vector<std::array<std::string, 5>> cells;
    cells.reserve(rows.size());
    for (const SummaryRow& row : rows)
        cells.push_back({row.preprocessing, format_percent(row.metrics.accuracy),
                         format_percent(row.metrics.precision), format_percent(row.metrics.recall),
                         format_percent(row.metrics.f1)});

    std::array<std::size_t, 5> widths;
    for (int c = 0; c < 5; ++c) {
        widths[c] = std::string(kHeaders[c]).size();
        for (const auto& row : cells) widths[c] = std::max(widths[c], row[c].size());
    }

    std::ostringstream out;
    for (int c = 0; c < 5; ++c) {
        if (c) out << "  ";
        out << kHeaders[c] << std::string(widths[c] - std::string(kHeaders[c]).size(), ' ');
    }
    out << '\n';
    for (const auto& row : cells) {
        for (int c = 0; c < 5; ++c) {
            if (c) out << "  ";
            if (c == 0) // names left-aligned, numbers right-aligned
                out << row[c] << std::string(widths[c] - row[c].size(), ' ');
            else
                out << std::string(widths[c] - row[c].size(), ' ') << row[c];
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (const char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace

std::string summary_table_csv(const std::vector<SummaryRow>& rows) {
    if (rows.empty())
        throw Error(ErrorKind::Precondition, "summary table needs at least one row");
    std::string csv = "preprocessing,accuracy,precision,recall,f1\n";
    for (const SummaryRow& row : rows) {
        csv += csv_field(row.preprocessing) + ',' + shortest(row.metrics.accuracy) + ',' +
               shortest(row.metrics.precision) + ',' + shortest(row.metrics.recall) + ',' +
               shortest(row.metrics.f1) + '\n';
    }
    return csv;
}

// ---------------------------------------------------------------------------
// JSON schema (version 1, documented in the README)
// ---------------------------------------------------------------------------

namespace {

ordered_json stats_to_json(const RuntimeStats& stats) {
    return ordered_json{{"n", stats.n},
                        {"mean", stats.mean},
                        {"median", stats.median},
                        {"std", stats.std_dev},
                        {"gauss_mu", stats.gauss_mu},
                        {"gauss_sigma", stats.gauss_sigma},
                        {"bin_edges", stats.bin_edges},
                        {"bin_counts", stats.bin_counts}};
}

ordered_json record_to_json(const EvalRecord& record) {
    ordered_json j{{"image", record.image_id},
                   {"truth", record.truth},
                   {"text", record.prediction.raw_text},
                   {"confidence", record.prediction.confidence},
                   {"correct", record.correct},
                   {"preprocess_elapsed", record.preprocess_elapsed},
                   {"ocr_elapsed", record.ocr_elapsed}};
    j["failure"] = record.failure ? ordered_json(*record.failure) : ordered_json(nullptr);
    return j;
}

ordered_json anova_to_json(const AnovaResult& result) {
    return ordered_json{{"ss_total", result.ss_total},
                        {"ss_between", result.ss_between},
                        {"ss_within", result.ss_within},
                        {"df_between", result.df_between},
                        {"df_within", result.df_within},
                        {"ms_between", result.ms_between},
                        {"ms_within", result.ms_within},
                        {"f_value", result.f_value},
                        {"p_value", result.p_value}};
}

ordered_json run_to_json(const RunReport& report) {
    ordered_json j;
    j["kind"] = "run";
    j["schema_version"] = 1;
    j["pipeline"] = report.pipeline;
    j["backend"] = report.backend;
    j["summary"] = ordered_json{{"accuracy", report.summary.accuracy},
                                {"precision", report.summary.precision},
                                {"recall", report.summary.recall},
                                {"f1", report.summary.f1}};
    j["counts"] = ordered_json{
        {"tp", report.counts.tp}, {"tn", report.counts.tn}, {"fp", report.counts.fp},
        {"fn", report.counts.fn}};
    j["runtime"] = ordered_json{{"preprocess", stats_to_json(report.preprocess_stats)},
                                {"ocr", stats_to_json(report.ocr_stats)},
                                {"total", stats_to_json(report.total_stats)}};
    if (report.roc) {
        ordered_json points = ordered_json::array();
        for (const auto& [fpr, tpr] : report.roc->points)
            points.push_back(ordered_json::array({fpr, tpr}));
        j["roc"] = ordered_json{{"points", points}, {"auc", report.roc->auc}};
    } else {
        j["roc"] = nullptr;
    }
    j["roc_notice"] = report.roc_notice ? ordered_json(*report.roc_notice) : ordered_json(nullptr);
    ordered_json records = ordered_json::array();
    for (const EvalRecord& record : report.records) records.push_back(record_to_json(record));
    j["records"] = std::move(records);
    return j;
}

ordered_json comparison_to_json(const ComparisonReport& report) {
    ordered_json j;
    j["kind"] = "comparison";
    j["schema_version"] = 1;
    ordered_json runs = ordered_json::array();
    for (const RunReport& run : report.runs) runs.push_back(run_to_json(run));
    j["runs"] = std::move(runs);
    j["anova_accuracy"] =
        report.anova_accuracy ? anova_to_json(*report.anova_accuracy) : ordered_json(nullptr);
    j["anova_accuracy_notice"] = report.anova_accuracy_notice
                                     ? ordered_json(*report.anova_accuracy_notice)
                                     : ordered_json(nullptr);
    j["anova_timing"] =
        report.anova_timing ? anova_to_json(*report.anova_timing) : ordered_json(nullptr);
    j["anova_timing_notice"] = report.anova_timing_notice
                                   ? ordered_json(*report.anova_timing_notice)
                                   : ordered_json(nullptr);
    ordered_json table = ordered_json::array();
    for (const SummaryRow& row : table_rows(report))
        table.push_back(ordered_json{{"preprocessing", row.preprocessing},
                                     {"accuracy", row.metrics.accuracy},
                                     {"precision", row.metrics.precision},
                                     {"recall", row.metrics.recall},
                                     {"f1", row.metrics.f1}});
    j["table"] = std::move(table);
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    out.flush();
    if (!out)
        throw Error(ErrorKind::Io, "write failure on " + path.string());
}

[[noreturn]] void schema_error(const std::string& what) {
    throw Error(ErrorKind::Schema, what);
}

const ordered_json& require(const ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field ") + key);
    return j.at(key);
}

double require_number(const ordered_json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number()) schema_error(std::string(key) + " must be a number");
    return v.get<double>();
}

std::uint64_t require_count(const ordered_json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number_unsigned()) schema_error(std::string(key) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string require_string(const ordered_json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_string()) schema_error(std::string(key) + " must be a string");
    return v.get<std::string>();
}

RuntimeStats stats_from_json(const ordered_json& j) {
    RuntimeStats stats;
    stats.n = require_count(j, "n");
    stats.mean = require_number(j, "mean");
    stats.median = require_number(j, "median");
    stats.std_dev = require_number(j, "std");
    stats.gauss_mu = require_number(j, "gauss_mu");
    stats.gauss_sigma = require_number(j, "gauss_sigma");
    const auto& edges = require(j, "bin_edges");
    const auto& counts = require(j, "bin_counts");
    if (!edges.is_array() || !counts.is_array() || edges.size() != counts.size() + 1)
        schema_error("bin_edges must hold bin_counts.size() + 1 numbers");
    for (const auto& e : edges) {
        if (!e.is_number()) schema_error("bin_edges entries must be numbers");
        stats.bin_edges.push_back(e.get<double>());
    }
    for (const auto& c : counts) {
        if (!c.is_number_unsigned()) schema_error("bin_counts entries must be counts");
        stats.bin_counts.push_back(c.get<std::uint64_t>());
    }
    return stats;
}

EvalRecord record_from_json(const ordered_json& j) {
    EvalRecord record;
    record.image_id = require_string(j, "image");
    record.truth = require_string(j, "truth");
    record.prediction.raw_text = require_string(j, "text");
    record.prediction.confidence = require_number(j, "confidence");
    const auto& correct = require(j, "correct");
    if (!correct.is_boolean()) schema_error("correct must be a boolean");
    record.correct = correct.get<bool>();
    record.preprocess_elapsed = require_number(j, "preprocess_elapsed");
    record.ocr_elapsed = require_number(j, "ocr_elapsed");
    const auto& failure = require(j, "failure");
    if (failure.is_string())
        record.failure = failure.get<std::string>();
    else if (!failure.is_null())
        schema_error("failure must be a string or null");
    record.prediction.elapsed_seconds = record.ocr_elapsed;
    return record;
}

AnovaResult anova_from_json(const ordered_json& j) {
    AnovaResult result;
    result.ss_total = require_number(j, "ss_total");
    result.ss_between = require_number(j, "ss_between");
    result.ss_within = require_number(j, "ss_within");
    result.df_between = require_count(j, "df_between");
    result.df_within = require_count(j, "df_within");
    result.ms_between = require_number(j, "ms_between");
    result.ms_within = require_number(j, "ms_within");
    result.f_value = require_number(j, "f_value");
    result.p_value = require_number(j, "p_value");
    return result;
}

RunReport run_from_json(const ordered_json& j) {
    RunReport report;
    report.pipeline = require_string(j, "pipeline");
    report.backend = require_string(j, "backend");
    const auto& summary = require(j, "summary");
    report.summary.accuracy = require_number(summary, "accuracy");
    report.summary.precision = require_number(summary, "precision");
    report.summary.recall = require_number(summary, "recall");
    report.summary.f1 = require_number(summary, "f1");
    const auto& counts = require(j, "counts");
    report.counts.tp = require_count(counts, "tp");
    report.counts.tn = require_count(counts, "tn");
    report.counts.fp = require_count(counts, "fp");
    report.counts.fn = require_count(counts, "fn");
    const auto& runtime = require(j, "runtime");
    report.preprocess_stats = stats_from_json(require(runtime, "preprocess"));
    report.ocr_stats = stats_from_json(require(runtime, "ocr"));
    report.total_stats = stats_from_json(require(runtime, "total"));
    const auto& roc = require(j, "roc");
    if (!roc.is_null()) {
        RocCurve curve;
        const auto& points = require(roc, "points");
        if (!points.is_array()) schema_error("roc.points must be an array");
        for (const auto& point : points) {
            if (!point.is_array() || point.size() != 2 || !point[0].is_number() ||
                !point[1].is_number())
                schema_error("roc points must be [fpr, tpr] pairs");
            curve.points.emplace_back(point[0].get<double>(), point[1].get<double>());
        }
        curve.auc = require_number(roc, "auc");
        report.roc = std::move(curve);
    }
    const auto& notice = require(j, "roc_notice");
    if (notice.is_string())
        report.roc_notice = notice.get<std::string>();
    else if (!notice.is_null())
        schema_error("roc_notice must be a string or null");
    const auto& records = require(j, "records");
    if (!records.is_array() || records.empty()) schema_error("records must be a nonempty array");
    for (const auto& record : records) report.records.push_back(record_from_json(record));
    return report;
}

ComparisonReport comparison_from_json(const ordered_json& j) {
    ComparisonReport report;
    const auto& runs = require(j, "runs");
    if (!runs.is_array() || runs.empty()) schema_error("runs must be a nonempty array");
    for (const auto& run : runs) report.runs.push_back(run_from_json(run));
    const auto& acc = require(j, "anova_accuracy");
    if (!acc.is_null()) report.anova_accuracy = anova_from_json(acc);
    const auto& acc_notice = require(j, "anova_accuracy_notice");
    if (acc_notice.is_string()) report.anova_accuracy_notice = acc_notice.get<std::string>();
    const auto& timing = require(j, "anova_timing");
    if (!timing.is_null()) report.anova_timing = anova_from_json(timing);
    const auto& timing_notice = require(j, "anova_timing_notice");
    if (timing_notice.is_string()) report.anova_timing_notice = timing_notice.get<std::string>();
    const auto& table = require(j, "table");
    if (!table.is_array() || table.size() != report.runs.size())
        schema_error("table must hold one row per run");
    return report;
}

} // namespace

void emit_json_report(const RunReport& report, const std::filesystem::path& path) {
    if (report.records.empty())
        throw Error(ErrorKind::Precondition, "cannot emit a report without records");
    write_text_file(path, run_to_json(report).dump(2) + "\n");
}

void emit_json_report(const ComparisonReport& report, const std::filesystem::path& path) {
    if (report.runs.empty())
        throw Error(ErrorKind::Precondition, "cannot emit an empty comparison");
    write_text_file(path, comparison_to_json(report).dump(2) + "\n");
}

LoadedReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    ordered_json parsed;
    try {
        parsed = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, "not valid JSON: " + std::string(e.what()));
    }
    const std::string kind = require_string(parsed, "kind");
    const auto& version = require(parsed, "schema_version");
    if (!version.is_number_integer() || version.get<std::int64_t>() != 1)
        schema_error("unsupported schema_version");
    if (kind == "run") return run_from_json(parsed);
    if (kind == "comparison") return comparison_from_json(parsed);
    schema_error("kind must be \"run\" or \"comparison\"");
}

// ---------------------------------------------------------------------------
// Verification: every derived number must be recomputable from the records.
// ---------------------------------------------------------------------------

namespace {

void check(std::vector<std::string>& mismatches, const std::string& path, bool ok) {
    if (!ok) mismatches.push_back(path);
}

void check_stats(std::vector<std::string>& mismatches, const std::string& prefix,
                 const std::vector<double>& times, const RuntimeStats& stored) {
    const std::size_t bins = std::max<std::size_t>(1, stored.bin_counts.size());
    const RuntimeStats expected = runtime_summary(times, bins);
    check(mismatches, prefix + ".n", stored.n == expected.n);
    check(mismatches, prefix + ".mean", stored.mean == expected.mean);
    check(mismatches, prefix + ".median", stored.median == expected.median);
    check(mismatches, prefix + ".std", stored.std_dev == expected.std_dev);
    check(mismatches, prefix + ".gauss_mu", stored.gauss_mu == expected.gauss_mu);
    check(mismatches, prefix + ".gauss_sigma", stored.gauss_sigma == expected.gauss_sigma);
    check(mismatches, prefix + ".bin_edges", stored.bin_edges == expected.bin_edges);
    check(mismatches, prefix + ".bin_counts", stored.bin_counts == expected.bin_counts);
}

void verify_run(const RunReport& report, const std::string& prefix,
                std::vector<std::string>& mismatches) {
    ConfusionCounts counts;
    std::vector<double> preprocess_times, ocr_times, total_times;
    std::vector<std::pair<double, bool>> scored;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const EvalRecord& record = report.records[i];
        bool correct = false;
        try {
            correct = normalize_plate(record.prediction.raw_text) == record.truth;
        } catch (const Error&) {
            correct = false;
        }
        check(mismatches, prefix + "records[" + std::to_string(i) + "].correct",
              record.correct == correct);
        if (correct)
            ++counts.tp;
        else {
            ++counts.fp;
            ++counts.fn;
        }
        preprocess_times.push_back(record.preprocess_elapsed);
        ocr_times.push_back(record.ocr_elapsed);
        total_times.push_back(record.preprocess_elapsed + record.ocr_elapsed);
        scored.emplace_back(record.prediction.confidence, correct);
    }

    check(mismatches, prefix + "counts.tp", report.counts.tp == counts.tp);
    check(mismatches, prefix + "counts.tn", report.counts.tn == counts.tn);
    check(mismatches, prefix + "counts.fp", report.counts.fp == counts.fp);
    check(mismatches, prefix + "counts.fn", report.counts.fn == counts.fn);

    const MetricsSummary summary = summarize(counts);
    check(mismatches, prefix + "summary.accuracy", report.summary.accuracy == summary.accuracy);
    check(mismatches, prefix + "summary.precision", report.summary.precision == summary.precision);
    check(mismatches, prefix + "summary.recall", report.summary.recall == summary.recall);
    check(mismatches, prefix + "summary.f1", report.summary.f1 == summary.f1);

    check_stats(mismatches, prefix + "runtime.preprocess", preprocess_times,
                report.preprocess_stats);
    check_stats(mismatches, prefix + "runtime.ocr", ocr_times, report.ocr_stats);
    check_stats(mismatches, prefix + "runtime.total", total_times, report.total_stats);

    try {
        const RocCurve expected = roc_curve(scored);
        if (!report.roc) {
            check(mismatches, prefix + "roc", false);
        } else {
            check(mismatches, prefix + "roc.points", report.roc->points == expected.points);
            check(mismatches, prefix + "roc.auc", report.roc->auc == expected.auc);
        }
    } catch (const Error&) {
        // Single class: the report must carry a notice instead of a curve.
        check(mismatches, prefix + "roc", !report.roc.has_value());
        check(mismatches, prefix + "roc_notice", report.roc_notice.has_value());
    }
}

void verify_comparison(const ComparisonReport& report, std::vector<std::string>& mismatches) {
    for (std::size_t i = 0; i < report.runs.size(); ++i)
        verify_run(report.runs[i], "runs[" + std::to_string(i) + "].", mismatches);

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

    const auto check_anova = [&](const char* name, const std::optional<AnovaResult>& stored,
                                 const AnovaInput& input) {
        try {
            const AnovaResult expected = anova_oneway(input);
            if (!stored) {
                check(mismatches, name, false);
                return;
            }
            check(mismatches, std::string(name) + ".ss_total", stored->ss_total == expected.ss_total);
            check(mismatches, std::string(name) + ".ss_between",
                  stored->ss_between == expected.ss_between);
            check(mismatches, std::string(name) + ".ss_within",
                  stored->ss_within == expected.ss_within);
            check(mismatches, std::string(name) + ".df_between",
                  stored->df_between == expected.df_between);
            check(mismatches, std::string(name) + ".df_within",
                  stored->df_within == expected.df_within);
            check(mismatches, std::string(name) + ".ms_between",
                  stored->ms_between == expected.ms_between);
            check(mismatches, std::string(name) + ".ms_within",
                  stored->ms_within == expected.ms_within);
            check(mismatches, std::string(name) + ".f_value", stored->f_value == expected.f_value);
            check(mismatches, std::string(name) + ".p_value", stored->p_value == expected.p_value);
        } catch (const Error&) {
            check(mismatches, name, !stored.has_value());
        }
    };
    check_anova("anova_accuracy", report.anova_accuracy, accuracy_groups);
    check_anova("anova_timing", report.anova_timing, timing_groups);
}

} // namespace

std::vector<std::string> verify_report(const LoadedReport& report) {
    std::vector<std::string> mismatches;
    if (const auto* run = std::get_if<RunReport>(&report))
        verify_run(*run, "", mismatches);
    else
        verify_comparison(std::get<ComparisonReport>(report), mismatches);
    return mismatches;
}

// ---------------------------------------------------------------------------
// SVG plots (deterministic: fixed formats, no timestamps)
// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 760.0;
constexpr double kTop = 70.0;
constexpr double kBottom = 540.0;

std::string svg_open(const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                    "viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    s += "<text x=\"400\" y=\"36\" font-family=\"sans-serif\" font-size=\"20\" "
         "text-anchor=\"middle\">" +
         title + "</text>\n";
    return s;
}

std::string axes_box() {
    return "<rect x=\"" + fixed(kLeft, 2) + "\" y=\"" + fixed(kTop, 2) + "\" width=\"" +
           fixed(kRight - kLeft, 2) + "\" height=\"" + fixed(kBottom - kTop, 2) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
}

std::string text_at(double x, double y, const std::string& label, const char* anchor = "middle",
                    int size = 14) {
    return "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) +
           "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
           "\" text-anchor=\"" + anchor + "\">" + label + "</text>\n";
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string roc_svg(const RunReport& report) {
    std::string s = svg_open("ROC - " + escape_xml(report.pipeline));
    s += axes_box();
    s += text_at((kLeft + kRight) / 2.0, kBottom + 40.0, "False Positive Rate");
    s += text_at(kLeft - 50.0, (kTop + kBottom) / 2.0, "TPR", "middle");
    // diagonal reference
    s += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kBottom, 2) + "\" x2=\"" +
         fixed(kRight, 2) + "\" y2=\"" + fixed(kTop, 2) +
         "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    if (report.roc) {
        std::string points;
        for (const auto& [fpr, tpr] : report.roc->points) {
            if (!points.empty()) points += ' ';
            points += fixed(kLeft + fpr * (kRight - kLeft), 2) + ',' +
                      fixed(kBottom - tpr * (kBottom - kTop), 2);
        }
        s += "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"2\" points=\"" + points +
             "\"/>\n";
        s += text_at(kRight - 16.0, kBottom - 16.0, "AUC = " + fixed(report.roc->auc, 4), "end");
    } else {
        s += text_at((kLeft + kRight) / 2.0, (kTop + kBottom) / 2.0,
                     report.roc_notice ? escape_xml(*report.roc_notice)
                                       : std::string("AUC undefined (single class)"));
    }
    s += "</svg>\n";
    return s;
}

std::string mean_median_svg(const std::vector<SummaryRow>& rows,
                            const std::vector<const RuntimeStats*>& stats) {
    std::string s = svg_open("Execution time: mean vs median");
    s += axes_box();
    double max_value = 0.0;
    for (const auto* st : stats) max_value = std::max({max_value, st->mean, st->median});
    if (max_value <= 0.0) max_value = 1.0;
    const double scale = (kBottom - kTop) / (max_value * 1.15);

    const double group_width = (kRight - kLeft) / static_cast<double>(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const double gx = kLeft + group_width * (static_cast<double>(i) + 0.5);
        const double bar_w = std::min(48.0, group_width / 3.0);
        const double mean_h = stats[i]->mean * scale;
        const double median_h = stats[i]->median * scale;
        s += "<rect x=\"" + fixed(gx - bar_w - 4.0, 2) + "\" y=\"" + fixed(kBottom - mean_h, 2) +
             "\" width=\"" + fixed(bar_w, 2) + "\" height=\"" + fixed(mean_h, 2) +
             "\" fill=\"#4477aa\"/>\n";
        s += "<rect x=\"" + fixed(gx + 4.0, 2) + "\" y=\"" + fixed(kBottom - median_h, 2) +
             "\" width=\"" + fixed(bar_w, 2) + "\" height=\"" + fixed(median_h, 2) +
             "\" fill=\"#66aa55\"/>\n";
        s += text_at(gx - bar_w / 2.0 - 4.0, kBottom - mean_h - 6.0, fixed(stats[i]->mean, 4), "middle", 11);
        s += text_at(gx + bar_w / 2.0 + 4.0, kBottom - median_h - 6.0, fixed(stats[i]->median, 4),
                     "middle", 11);
        s += text_at(gx, kBottom + 24.0, escape_xml(rows[i].preprocessing), "middle", 12);
    }
    s += "<rect x=\"90\" y=\"80\" width=\"14\" height=\"14\" fill=\"#4477aa\"/>\n";
    s += text_at(112.0, 92.0, "mean (s)", "start", 12);
    s += "<rect x=\"90\" y=\"102\" width=\"14\" height=\"14\" fill=\"#66aa55\"/>\n";
    s += text_at(112.0, 114.0, "median (s)", "start", 12);
    s += "</svg>\n";
    return s;
}

std::string hist_svg(const RunReport& report) {
    const RuntimeStats& stats = report.total_stats;
    std::string s = svg_open("Execution time distribution - " + escape_xml(report.pipeline));
    s += axes_box();
    s += text_at((kLeft + kRight) / 2.0, kBottom + 40.0, "total time (s)");

    const double lo = stats.bin_edges.front();
    const double hi = stats.bin_edges.back();
    std::uint64_t max_count = 1;
    for (const auto c : stats.bin_counts) max_count = std::max(max_count, c);

    const bool degenerate = hi == lo;
    const bool overlay = stats.gauss_sigma > 0.0 && !degenerate;
    double y_max = static_cast<double>(max_count);
    const double bin_width = degenerate ? 0.0 : (hi - lo) / static_cast<double>(stats.bin_counts.size());
    if (overlay) {
        const double peak = gaussian_pdf(stats.gauss_mu, stats.gauss_mu, stats.gauss_sigma) *
                            static_cast<double>(stats.n) * bin_width;
        y_max = std::max(y_max, peak);
    }
    const double y_scale = (kBottom - kTop) / (y_max * 1.1);

    if (degenerate) {
        // All samples share one value: a single full-width bar.
        const double h = static_cast<double>(stats.n) * y_scale;
        s += "<rect x=\"" + fixed(kLeft + (kRight - kLeft) / 4.0, 2) + "\" y=\"" +
             fixed(kBottom - h, 2) + "\" width=\"" + fixed((kRight - kLeft) / 2.0, 2) +
             "\" height=\"" + fixed(h, 2) + "\" fill=\"#66aa55\" stroke=\"black\"/>\n";
        s += text_at((kLeft + kRight) / 2.0, kTop + 24.0,
                     "sigma = 0 (no Gaussian overlay)", "middle", 12);
        s += text_at((kLeft + kRight) / 2.0, kBottom + 24.0, fixed(lo, 6), "middle", 12);
        s += "</svg>\n";
        return s;
    }

    const double x_scale = (kRight - kLeft) / (hi - lo);
    for (std::size_t i = 0; i < stats.bin_counts.size(); ++i) {
        const double x0 = kLeft + (stats.bin_edges[i] - lo) * x_scale;
        const double x1 = kLeft + (stats.bin_edges[i + 1] - lo) * x_scale;
        const double h = static_cast<double>(stats.bin_counts[i]) * y_scale;
        s += "<rect x=\"" + fixed(x0, 2) + "\" y=\"" + fixed(kBottom - h, 2) + "\" width=\"" +
             fixed(x1 - x0, 2) + "\" height=\"" + fixed(h, 2) +
             "\" fill=\"#66aa55\" stroke=\"black\"/>\n";
    }
    s += text_at(kLeft, kBottom + 24.0, fixed(lo, 6), "middle", 12);
    s += text_at(kRight, kBottom + 24.0, fixed(hi, 6), "middle", 12);

    if (overlay) {
        // Density scaled by n * bin width so curve and counts share the axis.
        std::string points;
        constexpr int kSamples = 160;
        for (int i = 0; i <= kSamples; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) / kSamples;
            const double y = gaussian_pdf(x, stats.gauss_mu, stats.gauss_sigma) *
                             static_cast<double>(stats.n) * bin_width;
            if (!points.empty()) points += ' ';
            points += fixed(kLeft + (x - lo) * x_scale, 2) + ',' + fixed(kBottom - y * y_scale, 2);
        }
        s += "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"2\" points=\"" + points +
             "\"/>\n";
    } else {
        s += text_at((kLeft + kRight) / 2.0, kTop + 24.0, "sigma = 0 (no Gaussian overlay)",
                     "middle", 12);
    }
    s += "</svg>\n";
    return s;
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (const char c : name) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
            out += c;
        else if (c >= 'A' && c <= 'Z')
            out += static_cast<char>(c - 'A' + 'a');
        else
            out += '_';
    }
    return out.empty() ? "arm" : out;
}

} // namespace

std::vector<std::filesystem::path> render_plots(const RunReport& report,
                                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    const auto emit = [&](const char* name, const std::string& content) {
        const std::filesystem::path path = out_dir / name;
        write_text_file(path, content);
        written.push_back(path);
    };
    emit("roc.svg", roc_svg(report));
    emit("mean_median.svg",
         mean_median_svg(table_rows(report), {&report.total_stats}));
    emit("hist.svg", hist_svg(report));
    return written;
}

std::vector<std::filesystem::path> render_plots(const ComparisonReport& report,
                                                const std::filesystem::path& out_dir) {
    if (report.runs.empty())
        throw Error(ErrorKind::Precondition, "cannot render an empty comparison");
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;

    std::vector<const RuntimeStats*> stats;
    for (const RunReport& run : report.runs) stats.push_back(&run.total_stats);
    const std::filesystem::path bars = out_dir / "mean_median.svg";
    write_text_file(bars, mean_median_svg(table_rows(report), stats));
    written.push_back(bars);

    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const std::string suffix =
            std::to_string(i) + "_" + sanitize_name(report.runs[i].pipeline) + ".svg";
        const std::filesystem::path roc_path = out_dir / ("roc_" + suffix);
        write_text_file(roc_path, roc_svg(report.runs[i]));
        written.push_back(roc_path);
        const std::filesystem::path hist_path = out_dir / ("hist_" + suffix);
        write_text_file(hist_path, hist_svg(report.runs[i]));
        written.push_back(hist_path);
    }
    return written;
}

} // namespace platebench
