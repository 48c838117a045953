#include "platebench/metrics.hpp"

#include <algorithm>
#include <cctype>

#include "platebench/error.hpp"

namespace platebench {

std::string to_string(PlateFormat format) {
    switch (format) {
    case PlateFormat::OldBrazil: return "oldbrazil";
    case PlateFormat::Mercosul: return "mercosul";
    case PlateFormat::Other: return "other";
    }
    return "other";
}

std::string normalize_plate(const std::string& raw) {
    std::string result;
    result.reserve(raw.size());
    for (const char c : raw) {
        const unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalpha(uc) && uc < 0x80)
            result += static_cast<char>(std::toupper(uc));
        else if (std::isdigit(uc))
            result += c;
    }
    if (result.empty())
        throw Error(ErrorKind::EmptyPlate, "nothing left of \"" + raw + "\" after normalization");
    return result;
}

bool is_canonical_plate(const std::string& text) {
    if (text.empty()) return false;
    return std::all_of(text.begin(), text.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    });
}

PlateFormat classify_format(const std::string& plate) {
    const auto letter = [](char c) { return c >= 'A' && c <= 'Z'; };
    const auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (plate.size() == 7) {
        const bool first_three = letter(plate[0]) && letter(plate[1]) && letter(plate[2]);
        if (first_three && digit(plate[3]) && digit(plate[4]) && digit(plate[5]) &&
            digit(plate[6]))
            return PlateFormat::OldBrazil;
        if (first_three && digit(plate[3]) && letter(plate[4]) && digit(plate[5]) &&
            digit(plate[6]))
            return PlateFormat::Mercosul;
    }
    return PlateFormat::Other;
}

EvalOutcome evaluate(const std::vector<std::pair<std::string, Prediction>>& records) {
    if (records.empty())
        throw Error(ErrorKind::Precondition, "evaluate needs at least one record");

    EvalOutcome outcome;
    outcome.records.reserve(records.size());
    std::size_t index = 0;
    for (const auto& [truth, prediction] : records) {
        if (!is_canonical_plate(truth))
            throw Error(ErrorKind::Precondition,
                        "truth \"" + truth + "\" is not a canonical plate");
        EvalRecord record;
        record.image_id = std::to_string(index++);
        record.truth = truth;
        record.prediction = prediction;
        try {
            record.correct = normalize_plate(prediction.raw_text) == truth;
        } catch (const Error&) {
            record.correct = false; // nothing recognizable: scored incorrect
        }
        if (record.correct)
            ++outcome.counts.tp;
        else {
            // Exact-match regime: the wrong emitted plate is a false positive
            // and the missed true plate a false negative; no negative class.
            ++outcome.counts.fp;
            ++outcome.counts.fn;
        }
        outcome.records.push_back(std::move(record));
    }
    return outcome;
}

MetricsSummary summarize(const ConfusionCounts& counts) {
    if (counts.total() == 0)
        throw Error(ErrorKind::Precondition, "summarize needs nonzero counts");

    MetricsSummary summary;
    const double tp = static_cast<double>(counts.tp);
    const double tn = static_cast<double>(counts.tn);
    const double fp = static_cast<double>(counts.fp);
    const double fn = static_cast<double>(counts.fn);

    if (counts.tn == 0 && counts.fp == counts.fn) {
        // Exact-match regime: fp and fn double-count the same wrong images,
        // so each wrong image enters the accuracy denominator once.
        summary.accuracy = counts.tp + counts.fp == 0 ? 0.0 : tp / (tp + fp);
    } else {
        summary.accuracy = (tp + tn) / (tp + tn + fp + fn);
    }
    summary.precision = counts.tp + counts.fp == 0 ? 0.0 : tp / (tp + fp);
    summary.recall = counts.tp + counts.fn == 0 ? 0.0 : tp / (tp + fn);
    // 2PR/(P+R) reduced to counts; the same real quotient, so the division
    // rounds identically to precision/recall in the exact-match regime.
    summary.f1 = 2 * counts.tp + counts.fp + counts.fn == 0 ? 0.0
                                                            : 2.0 * tp / (2.0 * tp + fp + fn);
    return summary;
}

RocCurve roc_curve(const std::vector<std::pair<double, bool>>& scored) {
    if (scored.empty())
        throw Error(ErrorKind::Precondition, "roc_curve needs at least one scored label");

    std::uint64_t positives = 0;
    for (const auto& [score, label] : scored)
        if (label) ++positives;
    const std::uint64_t negatives = scored.size() - positives;
    if (positives == 0)
        throw Error(ErrorKind::SingleClassRoc, "only negative labels present");
    if (negatives == 0)
        throw Error(ErrorKind::SingleClassRoc, "only positive labels present");

    std::vector<std::pair<double, bool>> sorted = scored;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double threshold = sorted[i].first;
        while (i < sorted.size() && sorted[i].first == threshold) {
            if (sorted[i].second)
                ++tp;
            else
                ++fp;
            ++i;
        }
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(negatives),
                                  static_cast<double>(tp) / static_cast<double>(positives));
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& [fpr0, tpr0] = curve.points[k - 1];
        const auto& [fpr1, tpr1] = curve.points[k];
        auc += (fpr1 - fpr0) * (tpr1 + tpr0) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

} // namespace platebench
