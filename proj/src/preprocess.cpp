#include "platebench/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>

#include "platebench/error.hpp"

namespace platebench {

namespace {

std::uint8_t round_half_away_clamp(double value) {
    const long long rounded = std::llround(value); // rounds halves away from zero
    return static_cast<std::uint8_t>(std::clamp(rounded, 0ll, 255ll));
}

} // namespace

std::string stage_name(const Stage& stage) {
    if (std::holds_alternative<GrayscaleStage>(stage)) return "grayscale";
    if (std::holds_alternative<ClaheStage>(stage)) return "clahe_rgb";
    return "bilateral";
}

Image to_grayscale(const Image& image) {
    validate_image(image);
    if (image.channels != 3)
        throw Error(ErrorKind::Precondition, "to_grayscale requires a 3-channel image, got " +
                                                 std::to_string(image.channels));
    Image out = Image::create(image.width, image.height, 1);
    const std::size_t pixels = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t p = 0; p < pixels; ++p) {
        const double r = image.samples[p * 3 + 0];
        const double g = image.samples[p * 3 + 1];
        const double b = image.samples[p * 3 + 2];
        out.samples[p] = round_half_away_clamp(0.299 * r + 0.587 * g + 0.114 * b);
    }
    return out;
}

namespace detail {

void clahe_clip_histogram(std::array<std::uint32_t, 256>& hist, std::uint32_t n_pixels,
                          double clip_limit) {
    // Integer clip level: clip_limit is a multiple of the uniform bin height,
    // floored to whole counts, never below one.
    std::uint64_t limit =
        static_cast<std::uint64_t>(std::floor(clip_limit * static_cast<double>(n_pixels) / 256.0));
    if (limit < 1) limit = 1;

    std::uint64_t excess = 0;
    for (auto& bin : hist) {
        if (bin > limit) {
            excess += bin - limit;
            bin = static_cast<std::uint32_t>(limit);
        }
    }
    if (excess == 0) return;

    const std::uint32_t share = static_cast<std::uint32_t>(excess / 256);
    const std::uint32_t residue = static_cast<std::uint32_t>(excess % 256);
    for (auto& bin : hist) bin += share;
    for (std::uint32_t b = 0; b < residue; ++b) hist[b] += 1;
}

std::array<std::uint8_t, 256> clahe_mapping(const std::array<std::uint32_t, 256>& hist,
                                            std::uint32_t n) {
    std::array<std::uint8_t, 256> mapping{};
    std::uint32_t cdf_min = 0;
    for (const auto bin : hist) {
        if (bin > 0) {
            cdf_min = bin;
            break;
        }
    }
    if (cdf_min == n) {
        // Single occupied level and nothing was redistributed; equalization
        // is undefined, keep values untouched.
        for (int v = 0; v < 256; ++v) mapping[v] = static_cast<std::uint8_t>(v);
        return mapping;
    }
    const std::int64_t den = static_cast<std::int64_t>(n) - cdf_min;
    std::uint64_t cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        const std::int64_t num =
            255 * (static_cast<std::int64_t>(cdf) - static_cast<std::int64_t>(cdf_min));
        if (num <= 0) {
            mapping[v] = 0;
            continue;
        }
        const std::int64_t rounded = (2 * num + den) / (2 * den); // round half away (positive)
        mapping[v] = static_cast<std::uint8_t>(std::min<std::int64_t>(rounded, 255));
    }
    return mapping;
}

} // namespace detail

namespace {

// Interpolation bracket for one output coordinate: blend tiles lo and hi
// with weight num/den on hi, exact integers in doubled coordinates.
struct Bracket {
    int lo = 0;
    int hi = 0;
    std::int64_t num = 0;
    std::int64_t den = 1;
};

// Tile boundaries with edge tiles absorbing the remainder, centers doubled.
struct TileAxis {
    std::vector<int> starts; // size tiles + 1, last == extent
    std::vector<int> centers2;
};

TileAxis make_axis(int extent, int tiles) {
    TileAxis axis;
    const int base = extent / tiles;
    for (int t = 0; t < tiles; ++t) axis.starts.push_back(t * base);
    axis.starts.push_back(extent);
    for (int t = 0; t < tiles; ++t)
        axis.centers2.push_back(axis.starts[t] + axis.starts[t + 1] - 1);
    return axis;
}

std::vector<Bracket> make_brackets(int extent, const TileAxis& axis) {
    const int tiles = static_cast<int>(axis.centers2.size());
    std::vector<Bracket> brackets(extent);
    for (int x = 0; x < extent; ++x) {
        const int doubled = 2 * x;
        Bracket b;
        if (doubled <= axis.centers2.front()) {
            b.lo = b.hi = 0;
        } else if (doubled >= axis.centers2.back()) {
            b.lo = b.hi = tiles - 1;
        } else {
            int t = 0;
            while (axis.centers2[t + 1] <= doubled) ++t;
            b.lo = t;
            b.hi = t + 1;
            b.num = doubled - axis.centers2[t];
            b.den = axis.centers2[t + 1] - axis.centers2[t];
        }
        brackets[x] = b;
    }
    return brackets;
}

} // namespace

Image clahe_rgb(const Image& image, const ClaheParams& params) {
    validate_image(image);
    if (image.channels != 3)
        throw Error(ErrorKind::Precondition, "clahe_rgb requires a 3-channel image, got " +
                                                 std::to_string(image.channels));
    if (params.clip_limit < 1.0)
        throw Error(ErrorKind::OutOfRange,
                    "clip_limit must be >= 1.0, got " + std::to_string(params.clip_limit));
    if (params.tiles_x < 1 || params.tiles_y < 1)
        throw Error(ErrorKind::OutOfRange, "tile counts must be >= 1");
    if (params.tiles_x > image.width || params.tiles_y > image.height)
        throw Error(ErrorKind::OutOfRange,
                    "tile grid " + std::to_string(params.tiles_x) + "x" +
                        std::to_string(params.tiles_y) + " larger than image " +
                        std::to_string(image.width) + "x" + std::to_string(image.height));

    const TileAxis x_axis = make_axis(image.width, params.tiles_x);
    const TileAxis y_axis = make_axis(image.height, params.tiles_y);
    const std::vector<Bracket> col_brackets = make_brackets(image.width, x_axis);
    const std::vector<Bracket> row_brackets = make_brackets(image.height, y_axis);

    Image out = Image::create(image.width, image.height, 3);
    std::vector<std::array<std::uint8_t, 256>> mappings(
        static_cast<std::size_t>(params.tiles_x) * params.tiles_y);

    for (int c = 0; c < 3; ++c) {
        for (int ty = 0; ty < params.tiles_y; ++ty) {
            for (int tx = 0; tx < params.tiles_x; ++tx) {
                std::array<std::uint32_t, 256> hist{};
                std::uint32_t n = 0;
                for (int y = y_axis.starts[ty]; y < y_axis.starts[ty + 1]; ++y) {
                    for (int x = x_axis.starts[tx]; x < x_axis.starts[tx + 1]; ++x) {
                        ++hist[image.at(x, y, c)];
                        ++n;
                    }
                }
                detail::clahe_clip_histogram(hist, n, params.clip_limit);
                mappings[static_cast<std::size_t>(ty) * params.tiles_x + tx] =
                    detail::clahe_mapping(hist, n);
            }
        }

        for (int y = 0; y < image.height; ++y) {
            const Bracket& ry = row_brackets[y];
            for (int x = 0; x < image.width; ++x) {
                const Bracket& rx = col_brackets[x];
                const std::uint8_t v = image.at(x, y, c);
                const auto map_at = [&](int ty, int tx) -> std::int64_t {
                    return mappings[static_cast<std::size_t>(ty) * params.tiles_x + tx][v];
                };
                const std::int64_t m00 = map_at(ry.lo, rx.lo);
                const std::int64_t m10 = map_at(ry.lo, rx.hi);
                const std::int64_t m01 = map_at(ry.hi, rx.lo);
                const std::int64_t m11 = map_at(ry.hi, rx.hi);
                const std::int64_t p = (rx.den - rx.num) * (ry.den - ry.num) * m00 +
                                       rx.num * (ry.den - ry.num) * m10 +
                                       (rx.den - rx.num) * ry.num * m01 + rx.num * ry.num * m11;
                const std::int64_t q = rx.den * ry.den;
                const std::int64_t blended = (2 * p + q) / (2 * q); // round half away
                out.at(x, y, c) = static_cast<std::uint8_t>(std::min<std::int64_t>(blended, 255));
            }
        }
    }
    return out;
}

Image bilateral_filter(const Image& image, const BilateralParams& params) {
    validate_image(image);
    if (params.radius < 1)
        throw Error(ErrorKind::OutOfRange,
                    "radius must be >= 1, got " + std::to_string(params.radius));
    if (!(params.sigma_space > 0.0) || !(params.sigma_range > 0.0))
        throw Error(ErrorKind::OutOfRange, "bilateral sigmas must be > 0");

    const int r = params.radius;
    const int window = 2 * r + 1;
    std::vector<double> spatial(static_cast<std::size_t>(window) * window);
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            spatial[static_cast<std::size_t>(dy + r) * window + (dx + r)] =
                std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) /
                         (2.0 * params.sigma_space * params.sigma_space));

    std::array<double, 256> range;
    for (int d = 0; d < 256; ++d)
        range[d] = std::exp(-(static_cast<double>(d) * d) /
                            (2.0 * params.sigma_range * params.sigma_range));

    Image out = Image::create(image.width, image.height, image.channels);
    for (int c = 0; c < image.channels; ++c) {
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                const int center = image.at(x, y, c);
                double num = 0.0;
                double den = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int yy = y + dy;
                    if (yy < 0 || yy >= image.height) continue;
                    for (int dx = -r; dx <= r; ++dx) {
                        const int xx = x + dx;
                        if (xx < 0 || xx >= image.width) continue;
                        const int value = image.at(xx, yy, c);
                        const double w =
                            spatial[static_cast<std::size_t>(dy + r) * window + (dx + r)] *
                            range[std::abs(value - center)];
                        num += w * value;
                        den += w;
                    }
                }
                out.at(x, y, c) = round_half_away_clamp(num / den);
            }
        }
    }
    return out;
}

std::pair<Image, std::vector<StageTiming>> apply_pipeline(const Image& image,
                                                          const PipelineSpec& spec) {
    validate_image(image);
    Image current = image;
    std::vector<StageTiming> timings;
    timings.reserve(spec.stages.size());
    for (const Stage& stage : spec.stages) {
        const bool needs_rgb =
            std::holds_alternative<GrayscaleStage>(stage) || std::holds_alternative<ClaheStage>(stage);
        if (needs_rgb && current.channels != 3)
            throw Error(ErrorKind::IncompatibleStage,
                        "stage '" + stage_name(stage) + "' requires a 3-channel image but gets " +
                            std::to_string(current.channels) + " channel(s)");
        const auto start = std::chrono::steady_clock::now();
        if (const auto* clahe = std::get_if<ClaheStage>(&stage))
            current = clahe_rgb(current, clahe->params);
        else if (const auto* bilateral = std::get_if<BilateralStage>(&stage))
            current = bilateral_filter(current, bilateral->params);
        else
            current = to_grayscale(current);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        timings.push_back({stage_name(stage), elapsed.count()});
    }
    return {std::move(current), std::move(timings)};
}

namespace {

std::string trim(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    std::size_t last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_int(const std::string& text, const std::string& what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(ErrorKind::Config, "malformed " + what + ": \"" + text + "\"");
    return value;
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(ErrorKind::Config, "malformed " + what + ": \"" + text + "\"");
    return value;
}

std::vector<std::pair<std::string, std::string>> parse_args(const std::string& args,
                                                            const std::string& stage) {
    std::vector<std::pair<std::string, std::string>> result;
    if (trim(args).empty()) return result;
    for (const std::string& item : split(args, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Config,
                        "malformed parameter \"" + trim(item) + "\" in stage " + stage);
        const std::string key = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorKind::Config,
                        "malformed parameter \"" + trim(item) + "\" in stage " + stage);
        result.emplace_back(key, value);
    }
    return result;
}

Stage parse_stage(const std::string& text) {
    std::string name = text;
    std::string args;
    const std::size_t paren = text.find('(');
    if (paren != std::string::npos) {
        if (text.back() != ')')
            throw Error(ErrorKind::Config, "unbalanced parentheses in stage \"" + text + "\"");
        name = trim(text.substr(0, paren));
        args = text.substr(paren + 1, text.size() - paren - 2);
    }

    if (name == "grayscale") {
        if (!trim(args).empty())
            throw Error(ErrorKind::Config, "grayscale takes no parameters");
        return GrayscaleStage{};
    }
    if (name == "clahe_rgb") {
        ClaheParams params;
        for (const auto& [key, value] : parse_args(args, name)) {
            if (key == "tiles") {
                const std::size_t x = value.find('x');
                if (x == std::string::npos)
                    throw Error(ErrorKind::Config, "tiles must look like 8x8, got \"" + value + "\"");
                params.tiles_x = parse_int(value.substr(0, x), "tiles");
                params.tiles_y = parse_int(value.substr(x + 1), "tiles");
            } else if (key == "clip") {
                params.clip_limit = parse_double(value, "clip");
            } else {
                throw Error(ErrorKind::Config, "unknown clahe_rgb parameter \"" + key + "\"");
            }
        }
        if (params.tiles_x < 1 || params.tiles_y < 1)
            throw Error(ErrorKind::OutOfRange, "tile counts must be >= 1");
        if (params.clip_limit < 1.0)
            throw Error(ErrorKind::OutOfRange,
                        "clip must be >= 1.0, got " + std::to_string(params.clip_limit));
        return ClaheStage{params};
    }
    if (name == "bilateral") {
        BilateralParams params;
        for (const auto& [key, value] : parse_args(args, name)) {
            if (key == "radius")
                params.radius = parse_int(value, "radius");
            else if (key == "sspace")
                params.sigma_space = parse_double(value, "sspace");
            else if (key == "srange")
                params.sigma_range = parse_double(value, "srange");
            else
                throw Error(ErrorKind::Config, "unknown bilateral parameter \"" + key + "\"");
        }
        if (params.radius < 1)
            throw Error(ErrorKind::OutOfRange,
                        "radius must be >= 1, got " + std::to_string(params.radius));
        if (!(params.sigma_space > 0.0) || !(params.sigma_range > 0.0))
            throw Error(ErrorKind::OutOfRange, "bilateral sigmas must be > 0");
        return BilateralStage{params};
    }
    throw Error(ErrorKind::Config, "unknown stage name \"" + name + "\"");
}

} // namespace

PipelineSpec parse_pipeline(const std::string& text) {
    PipelineSpec spec;
    const std::string trimmed = trim(text);
    if (trimmed.empty() || trimmed == "none") {
        spec.name = "none";
        return spec;
    }
    spec.name = trimmed;

    bool seen_grayscale = false;
    for (const std::string& part : split(trimmed, '|')) {
        const std::string stage_text = trim(part);
        if (stage_text.empty())
            throw Error(ErrorKind::Config, "empty stage in pipeline \"" + trimmed + "\"");
        Stage stage = parse_stage(stage_text);
        if (std::holds_alternative<GrayscaleStage>(stage)) {
            if (seen_grayscale)
                throw Error(ErrorKind::IncompatibleStage, "at most one grayscale stage is allowed");
            seen_grayscale = true;
        } else if (std::holds_alternative<ClaheStage>(stage) && seen_grayscale) {
            throw Error(ErrorKind::IncompatibleStage,
                        "clahe_rgb cannot follow grayscale (RGB-only stage)");
        }
        spec.stages.push_back(std::move(stage));
    }
    return spec;
}

} // namespace platebench
