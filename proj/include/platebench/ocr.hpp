#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "platebench/image.hpp"

namespace platebench {

struct Prediction {
    std::string raw_text;
    double confidence = 0.0; // [0, 1]
    double elapsed_seconds = 0.0;

    bool operator==(const Prediction&) const = default;
};

enum class BackendKind { Mock, Builtin, External };

struct RecognizerConfig {
    BackendKind kind = BackendKind::Builtin;
    // external
    std::string command_template;              // must contain "{in}"
    double timeout_seconds = 60.0;
    // mock
    double error_rate = 0.0;                   // [0, 1]
    std::uint64_t seed = 0;

    std::string describe() const;
};

/// Calibration backend. A generator keyed on (seed, image_index) decides
/// with probability error_rate to corrupt exactly one character of the truth
/// (replaced by a different alphabet character); otherwise the truth is
/// returned verbatim. Confidence is 1 - error_rate perturbed by +-0.05,
/// clamped to [0, 1]; the endpoints error_rate == 0 and == 1 give exactly
/// 1.0 and 0.0.
Prediction mock_recognize(const std::string& truth, double error_rate, std::uint64_t seed,
                          std::uint64_t image_index);

/// Offline template recognizer: grayscale -> Otsu threshold -> ink = the
/// smaller pixel class (ties dark) -> column-projection segmentation ->
/// each segment's ink bounding box resampled to 5x7 by block majority ->
/// nearest embedded glyph by Hamming distance (ties to alphabet order).
/// Confidence is 1 - mean normalized Hamming distance of the chosen glyphs.
/// Zero segments give an empty prediction with confidence 0.
Prediction builtin_recognize(const Image& image);

/// Adapter for out-of-process engines. The image is written to a temporary
/// netpbm file (P6 .ppm for RGB, P5 .pgm for grayscale) substituted for
/// "{in}"; the backend must print exactly one newline-terminated line of
/// UTF-8 JSON {"text": string, "confidence": number in [0,1]} on stdout.
/// Throws Error{Backend|Timeout|Protocol} accordingly.
Prediction external_recognize(const Image& image, const std::string& command_template,
                              double timeout_seconds = 60.0);

struct RecognizeOutcome {
    Prediction prediction;
    std::optional<std::string> failure;
};

/// Dispatches to the configured backend, timing the call with a monotonic
/// clock. Backend failures never propagate: the outcome carries the reason
/// and an empty prediction with confidence 0, so the run can continue and
/// score the image as incorrect. truth_hint is consulted only by the mock
/// backend.
RecognizeOutcome recognize(const Image& image, const RecognizerConfig& config,
                           std::uint64_t image_index,
                           const std::optional<std::string>& truth_hint = std::nullopt);

namespace detail {

/// Otsu threshold over a 256-bin histogram: maximizes the between-class
/// variance of classes {v <= t} and {v > t}, ties broken toward the lower
/// threshold. Returns nullopt when fewer than two distinct values occur.
std::optional<int> otsu_threshold(const std::array<std::uint64_t, 256>& histogram);

} // namespace detail

} // namespace platebench
