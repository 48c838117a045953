#include "platebench/ocr.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "platebench/error.hpp"
#include "platebench/font5x7.hpp"
#include "platebench/log.hpp"
#include "platebench/preprocess.hpp"
#include "platebench/rng.hpp"
#include "platebench/subprocess.hpp"
#include "temp_file.hpp"

namespace platebench {

std::string RecognizerConfig::describe() const {
    switch (kind) {
    case BackendKind::Mock:
        return "mock(error_rate=" + std::to_string(error_rate) +
               ", seed=" + std::to_string(seed) + ")";
    case BackendKind::Builtin:
        return "builtin";
    case BackendKind::External:
        return "external(" + command_template + ")";
    }
    return "unknown";
}

Prediction mock_recognize(const std::string& truth, double error_rate, std::uint64_t seed,
                          std::uint64_t image_index) {
    if (error_rate < 0.0 || error_rate > 1.0)
        throw Error(ErrorKind::OutOfRange,
                    "error_rate must be in [0, 1], got " + std::to_string(error_rate));
    if (truth.empty())
        throw Error(ErrorKind::Precondition, "mock backend needs a nonempty truth");

    // Stream keyed on (seed, image_index); fixed draw order: corruption
    // decision, confidence jitter, then position and replacement.
    SplitMix64 rng(mix64(seed) ^ mix64(image_index + 0x9E3779B97F4A7C15ull));
    const double corrupt_draw = rng.next_unit();
    const double jitter = (rng.next_unit() - 0.5) * 0.1; // +-0.05

    Prediction prediction;
    prediction.raw_text = truth;
    if (corrupt_draw < error_rate) {
        const std::string& alpha = font::alphabet();
        const std::size_t pos = rng.next_below(truth.size());
        const std::size_t original = alpha.find(truth[pos]);
        std::size_t pick;
        if (original == std::string::npos) {
            pick = rng.next_below(alpha.size());
        } else {
            pick = rng.next_below(alpha.size() - 1);
            if (pick >= original) ++pick;
        }
        prediction.raw_text[pos] = alpha[pick];
    }

    if (error_rate == 0.0)
        prediction.confidence = 1.0;
    else if (error_rate == 1.0)
        prediction.confidence = 0.0;
    else
        prediction.confidence = std::clamp(1.0 - error_rate + jitter, 0.0, 1.0);
    return prediction;
}

namespace detail {

std::optional<int> otsu_threshold(const std::array<std::uint64_t, 256>& histogram) {
    std::uint64_t total = 0;
    double weighted_sum = 0.0;
    for (int v = 0; v < 256; ++v) {
        total += histogram[v];
        weighted_sum += static_cast<double>(v) * histogram[v];
    }
    if (total == 0) return std::nullopt;

    std::optional<int> best_t;
    double best_var = -1.0;
    std::uint64_t w0 = 0;
    double sum0 = 0.0;
    for (int t = 0; t < 256; ++t) {
        w0 += histogram[t];
        sum0 += static_cast<double>(t) * histogram[t];
        if (w0 == 0) continue;
        const std::uint64_t w1 = total - w0;
        if (w1 == 0) break;
        const double mu0 = sum0 / w0;
        const double mu1 = (weighted_sum - sum0) / w1;
        const double var =
            static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) { // strict: ties keep the lower threshold
            best_var = var;
            best_t = t;
        }
    }
    return best_t;
}

} // namespace detail

namespace {

struct Segment {
    int x0, x1; // inclusive ink column range
    int y0, y1; // inclusive ink row range within the columns
};

// Resamples a bounding box of the binary ink mask to the 5x7 glyph grid by
// block majority (ties count as ink; empty cells are background).
std::array<std::uint8_t, 7> resample_to_glyph(const std::vector<std::uint8_t>& ink, int width,
                                              const Segment& seg) {
    std::array<std::uint8_t, 7> rows{};
    const int w = seg.x1 - seg.x0 + 1;
    const int h = seg.y1 - seg.y0 + 1;
    for (int gr = 0; gr < font::kGlyphHeight; ++gr) {
        for (int gc = 0; gc < font::kGlyphWidth; ++gc) {
            const int ys = seg.y0 + gr * h / font::kGlyphHeight;
            const int ye = seg.y0 + (gr + 1) * h / font::kGlyphHeight;
            const int xs = seg.x0 + gc * w / font::kGlyphWidth;
            const int xe = seg.x0 + (gc + 1) * w / font::kGlyphWidth;
            int area = 0;
            int hits = 0;
            for (int y = ys; y < ye; ++y) {
                for (int x = xs; x < xe; ++x) {
                    ++area;
                    hits += ink[static_cast<std::size_t>(y) * width + x];
                }
            }
            if (area > 0 && hits * 2 >= area)
                rows[gr] |= static_cast<std::uint8_t>(1u << (font::kGlyphWidth - 1 - gc));
        }
    }
    return rows;
}

int hamming(const std::array<std::uint8_t, 7>& a, const std::array<std::uint8_t, 7>& b) {
    int distance = 0;
    for (int row = 0; row < 7; ++row)
        distance += std::popcount(static_cast<unsigned>((a[row] ^ b[row]) & 0x1F));
    return distance;
}

} // namespace

Prediction builtin_recognize(const Image& image) {
    validate_image(image);
    const Image gray = image.channels == 3 ? to_grayscale(image) : image;

    std::array<std::uint64_t, 256> hist{};
    for (const std::uint8_t v : gray.samples) ++hist[v];
    const std::optional<int> threshold = detail::otsu_threshold(hist);

    Prediction prediction;
    prediction.confidence = 0.0;
    if (!threshold) return prediction; // constant image: nothing to segment

    std::uint64_t dark = 0;
    for (int v = 0; v <= *threshold; ++v) dark += hist[v];
    const bool ink_is_dark = dark <= gray.samples.size() - dark;

    std::vector<std::uint8_t> ink(gray.samples.size());
    for (std::size_t i = 0; i < gray.samples.size(); ++i) {
        const bool is_dark = gray.samples[i] <= *threshold;
        ink[i] = (is_dark == ink_is_dark) ? 1 : 0;
    }

    // Column projection; characters are maximal runs of columns holding ink.
    std::vector<std::uint8_t> column_has_ink(gray.width, 0);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            if (ink[static_cast<std::size_t>(y) * gray.width + x]) column_has_ink[x] = 1;

    std::vector<Segment> segments;
    int x = 0;
    while (x < gray.width) {
        if (!column_has_ink[x]) {
            ++x;
            continue;
        }
        Segment seg{x, x, gray.height, -1};
        while (seg.x1 + 1 < gray.width && column_has_ink[seg.x1 + 1]) ++seg.x1;
        for (int y = 0; y < gray.height; ++y) {
            for (int cx = seg.x0; cx <= seg.x1; ++cx) {
                if (ink[static_cast<std::size_t>(y) * gray.width + cx]) {
                    seg.y0 = std::min(seg.y0, y);
                    seg.y1 = std::max(seg.y1, y);
                }
            }
        }
        segments.push_back(seg);
        x = seg.x1 + 1;
    }
    if (segments.empty()) return prediction;

    const std::string& alpha = font::alphabet();
    constexpr int kGlyphBits = font::kGlyphWidth * font::kGlyphHeight;
    double distance_sum = 0.0;
    for (const Segment& seg : segments) {
        const auto observed = resample_to_glyph(ink, gray.width, seg);
        char best_char = alpha[0];
        int best_distance = kGlyphBits + 1;
        for (const char candidate : alpha) {
            const int d = hamming(observed, font::glyph(candidate));
            if (d < best_distance) {
                best_distance = d;
                best_char = candidate;
            }
        }
        prediction.raw_text += best_char;
        distance_sum += static_cast<double>(best_distance) / kGlyphBits;
    }
    prediction.confidence = 1.0 - distance_sum / static_cast<double>(segments.size());
    return prediction;
}

Prediction external_recognize(const Image& image, const std::string& command_template,
                              double timeout_seconds) {
    validate_image(image);
    if (command_template.find("{in}") == std::string::npos)
        throw Error(ErrorKind::Config, "backend command template must contain {in}");

    const char* extension = image.channels == 3 ? ".ppm" : ".pgm";
    internal::TempFileGuard input(internal::unique_temp_path("platebench-ocr", extension));
    save_image(image, input.path());

    const std::string command = substitute_token(command_template, "{in}", input.path().string());
    log_debug("running backend: " + command);
    const auto start = std::chrono::steady_clock::now();
    const CommandResult result =
        run_command(command, std::chrono::duration<double>(timeout_seconds));
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

    if (result.timed_out)
        throw Error(ErrorKind::Timeout, "backend exceeded " + std::to_string(timeout_seconds) +
                                            " s: " + command_template);
    if (result.exit_code != 0)
        throw Error(ErrorKind::Backend,
                    "backend exited with status " + std::to_string(result.exit_code));

    // Exactly one newline-terminated line on stdout.
    if (result.output.empty() || result.output.back() != '\n' ||
        std::count(result.output.begin(), result.output.end(), '\n') != 1)
        throw Error(ErrorKind::Protocol,
                    "backend must print exactly one newline-terminated JSON line, got " +
                        std::to_string(result.output.size()) + " byte(s)");
    const std::string line = result.output.substr(0, result.output.size() - 1);

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Protocol, std::string("backend response is not JSON: ") + e.what());
    }
    if (!parsed.is_object() || !parsed.contains("text") || !parsed["text"].is_string() ||
        !parsed.contains("confidence") || !parsed["confidence"].is_number())
        throw Error(ErrorKind::Protocol,
                    "backend response must be {\"text\": string, \"confidence\": number}");
    const double confidence = parsed["confidence"].get<double>();
    if (confidence < 0.0 || confidence > 1.0)
        throw Error(ErrorKind::Protocol,
                    "backend confidence out of [0, 1]: " + std::to_string(confidence));

    Prediction prediction;
    prediction.raw_text = parsed["text"].get<std::string>();
    prediction.confidence = confidence;
    prediction.elapsed_seconds = wall.count();
    return prediction;
}

RecognizeOutcome recognize(const Image& image, const RecognizerConfig& config,
                           std::uint64_t image_index,
                           const std::optional<std::string>& truth_hint) {
    RecognizeOutcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (config.kind) {
        case BackendKind::Mock:
            if (!truth_hint)
                throw Error(ErrorKind::Precondition, "mock backend requires a truth hint");
            outcome.prediction =
                mock_recognize(*truth_hint, config.error_rate, config.seed, image_index);
            break;
        case BackendKind::Builtin:
            outcome.prediction = builtin_recognize(image);
            break;
        case BackendKind::External:
            outcome.prediction =
                external_recognize(image, config.command_template, config.timeout_seconds);
            break;
        }
    } catch (const std::exception& e) {
        outcome.prediction = Prediction{};
        outcome.failure = e.what();
        log_error("backend failure on image " + std::to_string(image_index) + ": " + e.what());
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (config.kind != BackendKind::External || outcome.failure)
        outcome.prediction.elapsed_seconds = elapsed.count();
    return outcome;
}

} // namespace platebench
