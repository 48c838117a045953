#include "platebench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "platebench/error.hpp"
#include "platebench/font5x7.hpp"
#include "platebench/rng.hpp"

namespace platebench {

namespace {

constexpr const char* kLetters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr const char* kDigits = "0123456789";

void validate_spec(const PlateSpec& spec) {
    if (spec.format == PlateFormat::Other)
        throw Error(ErrorKind::Precondition, "cannot generate a plate of format Other");
    if (spec.glyph_scale < 2)
        throw Error(ErrorKind::Precondition,
                    "glyph_scale must be >= 2, got " + std::to_string(spec.glyph_scale));
    if (spec.padding < 0)
        throw Error(ErrorKind::Precondition, "padding must be >= 0");
    if (spec.foreground == spec.background)
        throw Error(ErrorKind::Precondition, "foreground and background colors must differ");
}

void validate_params(const PerturbParams& params) {
    if (params.noise_sigma < 0.0)
        throw Error(ErrorKind::Precondition, "noise_sigma must be >= 0");
    if (!(params.contrast > 0.0) || params.contrast > 1.0)
        throw Error(ErrorKind::Precondition, "contrast must be in (0, 1]");
}

std::string random_plate_text(PlateFormat format, SplitMix64& rng) {
    // OldBrazil: LLLDDDD. Mercosul: LLLDLDD.
    const std::string layout = format == PlateFormat::OldBrazil ? "LLLDDDD" : "LLLDLDD";
    std::string text;
    for (const char slot : layout) {
        if (slot == 'L')
            text += kLetters[rng.next_below(26)];
        else
            text += kDigits[rng.next_below(10)];
    }
    return text;
}

} // namespace

std::pair<Image, std::string> generate_plate(const PlateSpec& spec, std::uint64_t seed) {
    validate_spec(spec);
    SplitMix64 rng(seed);
    const std::string text = random_plate_text(spec.format, rng);

    const int scale = spec.glyph_scale;
    const int chars = static_cast<int>(text.size());
    // One glyph-cell gap between characters.
    const int width =
        2 * spec.padding + chars * font::kGlyphWidth * scale + (chars - 1) * scale;
    const int height = 2 * spec.padding + font::kGlyphHeight * scale;

    Image image = Image::create(width, height, 3);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c) image.at(x, y, c) = spec.background[c];

    for (int i = 0; i < chars; ++i) {
        const int origin_x = spec.padding + i * (font::kGlyphWidth + 1) * scale;
        const int origin_y = spec.padding;
        for (int row = 0; row < font::kGlyphHeight; ++row) {
            for (int col = 0; col < font::kGlyphWidth; ++col) {
                if (!font::glyph_pixel(text[i], col, row)) continue;
                for (int dy = 0; dy < scale; ++dy)
                    for (int dx = 0; dx < scale; ++dx)
                        for (int c = 0; c < 3; ++c)
                            image.at(origin_x + col * scale + dx, origin_y + row * scale + dy, c) =
                                spec.foreground[c];
            }
        }
    }
    return {std::move(image), text};
}

Image perturb(const Image& image, const PerturbParams& params, std::uint64_t seed) {
    validate_image(image);
    validate_params(params);
    SplitMix64 rng(seed);
    Image out = image;
    const bool noisy = params.noise_sigma > 0.0;
    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    for (std::size_t i = 0; i < image.samples.size(); ++i) {
        const int x = static_cast<int>((i % stride) / image.channels);
        double value = (static_cast<double>(image.samples[i]) - 128.0) * params.contrast + 128.0 +
                       params.brightness_slope * x;
        if (noisy) value += params.noise_sigma * rng.next_normal();
        const long long rounded = std::llround(value);
        out.samples[i] = static_cast<std::uint8_t>(std::clamp(rounded, 0ll, 255ll));
    }
    return out;
}

std::filesystem::path generate_dataset(std::uint64_t count, const PlateSpec& spec,
                                       const PerturbParams& params, std::uint64_t seed,
                                       const std::filesystem::path& out_dir) {
    if (count < 1)
        throw Error(ErrorKind::Precondition, "dataset count must be >= 1");
    validate_spec(spec);
    validate_params(params);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec && !std::filesystem::is_directory(out_dir))
        throw Error(ErrorKind::Io, "cannot create " + out_dir.string());

    const std::filesystem::path manifest_path = out_dir / "manifest.csv";
    std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest)
        throw Error(ErrorKind::Io, "cannot write " + manifest_path.string());
    manifest << "image,plate\n";

    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t derived = seed + i;
        auto [image, text] = generate_plate(spec, derived);
        const Image degraded = perturb(image, params, derived);
        char name[32];
        std::snprintf(name, sizeof name, "plate_%05llu.ppm", static_cast<unsigned long long>(i));
        save_image(degraded, out_dir / name);
        manifest << name << ',' << text << '\n';
    }
    manifest.flush();
    if (!manifest)
        throw Error(ErrorKind::Io, "write failure on " + manifest_path.string());
    return manifest_path;
}

} // namespace platebench
