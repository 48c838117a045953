#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "platebench/ocr.hpp"

namespace platebench {

/// Brazilian plate layouts. OldBrazil is three letters + four digits,
/// Mercosul is three letters, one digit, one letter, two digits.
enum class PlateFormat { OldBrazil, Mercosul, Other };

std::string to_string(PlateFormat format);

/// Canonical plate text: uppercase, every character outside [A-Z0-9]
/// stripped. Throws Error{EmptyPlate} when nothing remains.
std::string normalize_plate(const std::string& raw);

/// True if `text` is already canonical (nonempty, A-Z0-9 only).
bool is_canonical_plate(const std::string& text);

PlateFormat classify_format(const std::string& plate);

/// Exact-match confusion tallies. Every image yields exactly one prediction
/// and there is no negative class, so evaluate() always produces tn == 0 and
/// fp == fn: a wrong string is at once a false positive for the emitted
/// plate and a false negative for the true one.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

/// One evaluated image: prediction joined against ground truth plus the two
/// separately measured stage durations.
struct EvalRecord {
    std::string image_id;
    std::string truth;
    Prediction prediction;
    bool correct = false;
    double preprocess_elapsed = 0.0;
    double ocr_elapsed = 0.0;
    std::optional<std::string> failure;
};

struct MetricsSummary {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    bool operator==(const MetricsSummary&) const = default;
};

struct EvalOutcome {
    std::vector<EvalRecord> records;
    ConfusionCounts counts;
};

/// Scores each (truth, prediction) pair: correct iff the normalized raw text
/// equals the canonical truth; predictions that normalize to nothing count
/// as incorrect. Truths must already be canonical. Throws on empty input.
EvalOutcome evaluate(const std::vector<std::pair<std::string, Prediction>>& records);

/// The four metrics. In the exact-match regime (tn == 0, fp == fn) every
/// wrong image counts once in the denominator, so all four equal tp/n and
/// the results are bitwise identical doubles. General counts fall back to
/// the textbook formulas, with 0 for empty denominators.
MetricsSummary summarize(const ConfusionCounts& counts);

struct RocCurve {
    std::vector<std::pair<double, double>> points; // (fpr, tpr), starts (0,0) ends (1,1)
    double auc = 0.0;
};

/// Threshold sweep over descending confidence with ties grouped, AUC by the
/// trapezoidal rule (equal to pair counting with half credit for ties).
/// Throws Error{SingleClassRoc} naming the class if only one label occurs.
RocCurve roc_curve(const std::vector<std::pair<double, bool>>& scored);

} // namespace platebench
