#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace platebench {

/// Rectangular 8-bit raster, 1 (gray) or 3 (RGB) channels, row-major
/// interleaved samples. Immutable by convention once constructed; all
/// kernels return new images.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> samples;

    static Image create(int width, int height, int channels, std::uint8_t fill = 0);

    std::size_t sample_count() const { return samples.size(); }

    std::uint8_t at(int x, int y, int c) const {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool operator==(const Image&) const = default;
};

/// Throws Error{Precondition} unless dimensions, channel count and sample
/// length are consistent.
void validate_image(const Image& image);

/// Reads a binary PGM (P5, 1 channel) or PPM (P6, 3 channels) file with
/// maxval 255. '#' comments in the header are skipped. Decoding is
/// bit-exact: sample i of the file is sample i of the Image.
Image load_image(const std::filesystem::path& path);

/// Writes P5 for 1-channel images and P6 for 3-channel images, maxval 255,
/// single whitespace after each header token. load_image(save_image(x)) == x.
void save_image(const Image& image, const std::filesystem::path& path);

/// Runs a user-configured converter command to obtain a PPM/PGM for formats
/// the native codec does not read. The template must contain both "{in}"
/// and "{out}" placeholders, substituted verbatim; the temporary output file
/// is removed afterwards.
Image ingest_convert(const std::filesystem::path& path, const std::string& converter_template);

} // namespace platebench
