#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

#include "platebench/image.hpp"
#include "platebench/metrics.hpp"

namespace platebench {

/// Rendering recipe for synthetic plates. Glyphs come from the embedded 5x7
/// font, each font pixel drawn as a glyph_scale x glyph_scale block, with a
/// one-cell gap between characters and `padding` pixels of background on
/// every side.
struct PlateSpec {
    PlateFormat format = PlateFormat::Mercosul;
    int glyph_scale = 4;                              // >= 2
    int padding = 6;
    std::array<std::uint8_t, 3> foreground = {60, 60, 60};
    std::array<std::uint8_t, 3> background = {200, 200, 200};
};

/// Photometric degradations: per-sample Gaussian noise, a per-column
/// brightness ramp, and a contrast factor applied about 128.
struct PerturbParams {
    double noise_sigma = 0.0;      // >= 0
    double brightness_slope = 0.0; // intensity units per pixel column
    double contrast = 1.0;         // (0, 1]
};

/// Renders a random plate of the requested format. Characters are drawn from
/// the format's alphabet with a SplitMix64 generator seeded by `seed`; the
/// returned text is the canonical ground truth. Same seed, same output.
std::pair<Image, std::string> generate_plate(const PlateSpec& spec, std::uint64_t seed);

/// out = clamp(round((in - 128) * contrast + 128 + brightness_slope * x + N(0, sigma)))
/// with one noise deviate per sample in row-major interleaved order, drawn
/// from SplitMix64(seed) via Box-Muller. Deterministic per (image, params, seed).
Image perturb(const Image& image, const PerturbParams& params, std::uint64_t seed);

/// Writes `count` perturbed plates (PPM) plus a `manifest.csv` with header
/// exactly "image,plate" into out_dir. Image i uses derived seed = seed + i
/// for both generation and perturbation. Returns the manifest path.
std::filesystem::path generate_dataset(std::uint64_t count, const PlateSpec& spec,
                                       const PerturbParams& params, std::uint64_t seed,
                                       const std::filesystem::path& out_dir);

} // namespace platebench
