#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "platebench/image.hpp"

namespace platebench {

struct ClaheParams {
    int tiles_x = 8;
    int tiles_y = 8;
    double clip_limit = 2.0; // multiple of the uniform bin height, >= 1.0
    static constexpr int kBins = 256;
};

struct BilateralParams {
    int radius = 4; // window is (2*radius+1)^2
    double sigma_space = 75.0;
    double sigma_range = 75.0;
};

struct GrayscaleStage {
    bool operator==(const GrayscaleStage&) const = default;
};
struct ClaheStage {
    ClaheParams params;
};
struct BilateralStage {
    BilateralParams params;
};

using Stage = std::variant<GrayscaleStage, ClaheStage, BilateralStage>;

std::string stage_name(const Stage& stage);

/// One experimental arm: an ordered list of preprocessing stages. An empty
/// list is the baseline "no preprocessing" arm. At most one grayscale stage
/// is allowed and no RGB-only stage (clahe_rgb) may follow it.
struct PipelineSpec {
    std::string name = "none";
    std::vector<Stage> stages;
};

struct StageTiming {
    std::string stage;
    double elapsed_seconds = 0.0;
};

/// BT.601 luma: gray = round(0.299 R + 0.587 G + 0.114 B), rounded half away
/// from zero and clamped to [0, 255]. Requires a 3-channel image.
Image to_grayscale(const Image& image);

/// Contrast-limited adaptive histogram equalization applied to each RGB
/// channel independently. The image is partitioned into tiles_x x tiles_y
/// tiles (edge tiles absorb remainder pixels); each tile's 256-bin histogram
/// is clipped at max(1, floor(clip_limit * tile_pixels / 256)) with the
/// excess redistributed equally in a single pass (integer share to every bin,
/// the division residue added to bins 0 upward); the tile mapping is
/// round(255 * (cdf - cdf_min) / (n - cdf_min)); output pixels blend the four
/// nearest tile-center mappings bilinearly (edge and corner pixels use the
/// available 2 or 1). The blend is evaluated in exact integer arithmetic.
Image clahe_rgb(const Image& image, const ClaheParams& params);

/// Edge-preserving smoother. For each channel c and pixel p:
///   out(p) = sum_q w(p,q) I_c(q) / sum_q w(p,q)
/// over the (2r+1)^2 window clamped to the image bounds, with
///   w(p,q) = exp(-|p-q|^2 / (2 sigma_space^2))
///          * exp(-(I_c(q)-I_c(p))^2 / (2 sigma_range^2)).
/// Results are rounded half away from zero and clamped to [0, 255].
Image bilateral_filter(const Image& image, const BilateralParams& params);

/// Applies the stages in order, timing each with a monotonic clock. An empty
/// spec returns the input unchanged with no timings.
std::pair<Image, std::vector<StageTiming>> apply_pipeline(const Image& image,
                                                          const PipelineSpec& spec);

/// Parses the pipeline grammar `stage(param=value,...) [ "|" stage... ]`.
/// "" and "none" give the empty baseline spec. Stages: grayscale,
/// clahe_rgb(tiles=WxH, clip=...), bilateral(radius=..., sspace=..., srange=...).
/// Omitted parameters take the defaults above.
PipelineSpec parse_pipeline(const std::string& text);

namespace detail {

/// In-place CLAHE clip + single-pass redistribution of a 256-bin histogram
/// holding n_pixels samples. The bin sum is preserved.
void clahe_clip_histogram(std::array<std::uint32_t, 256>& hist, std::uint32_t n_pixels,
                          double clip_limit);

/// Tile value mapping from a clipped histogram whose bins sum to n. The
/// degenerate single-level case (cdf_min == n) maps values to themselves.
std::array<std::uint8_t, 256> clahe_mapping(const std::array<std::uint32_t, 256>& hist,
                                            std::uint32_t n);

} // namespace detail

} // namespace platebench
