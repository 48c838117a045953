#include "platebench/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>

#include "platebench/error.hpp"
#include "platebench/log.hpp"
#include "platebench/subprocess.hpp"
#include "temp_file.hpp"

namespace platebench {

Image Image::create(int width, int height, int channels, std::uint8_t fill) {
    Image image;
    image.width = width;
    image.height = height;
    image.channels = channels;
    image.samples.assign(static_cast<std::size_t>(width) * height * channels, fill);
    validate_image(image);
    return image;
}

void validate_image(const Image& image) {
    if (image.width < 1 || image.height < 1)
        throw Error(ErrorKind::Precondition, "image dimensions must be at least 1x1");
    if (image.channels != 1 && image.channels != 3)
        throw Error(ErrorKind::Precondition, "image must have 1 or 3 channels");
    const std::size_t expected =
        static_cast<std::size_t>(image.width) * image.height * image.channels;
    if (image.samples.size() != expected)
        throw Error(ErrorKind::Precondition, "sample buffer length does not match dimensions");
}

namespace {

bool is_pnm_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

// Skips whitespace and '#' comments (to end of line) within the header.
void skip_separators(const std::string& data, std::size_t& pos) {
    while (pos < data.size()) {
        if (is_pnm_space(data[pos])) {
            ++pos;
        } else if (data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
}

long parse_header_number(const std::string& data, std::size_t& pos, const char* what) {
    skip_separators(data, pos);
    if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
        throw Error(ErrorKind::Malformed, std::string("expected ") + what + " in netpbm header");
    long value = 0;
    while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
        value = value * 10 + (data[pos] - '0');
        if (value > std::numeric_limits<int>::max())
            throw Error(ErrorKind::Malformed, std::string(what) + " overflows");
        ++pos;
    }
    return value;
}

} // namespace

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof())
        throw Error(ErrorKind::Io, "read failure on " + path.string());

    if (data.size() < 2)
        throw Error(ErrorKind::Malformed, "file too short for a netpbm header: " + path.string());
    const std::string magic = data.substr(0, 2);
    int channels = 0;
    if (magic == "P5") channels = 1;
    else if (magic == "P6") channels = 3;
    else
        throw Error(ErrorKind::UnsupportedMagic,
                    "expected P5 or P6, got \"" + magic + "\" in " + path.string());

    std::size_t pos = 2;
    const long width = parse_header_number(data, pos, "width");
    const long height = parse_header_number(data, pos, "height");
    const long maxval = parse_header_number(data, pos, "maxval");
    if (width < 1 || height < 1)
        throw Error(ErrorKind::Malformed, "dimensions must be at least 1x1: " + path.string());
    if (maxval != 255)
        throw Error(ErrorKind::BadMaxval,
                    "maxval must be 255, got " + std::to_string(maxval) + " in " + path.string());

    // Exactly one whitespace byte separates the header from the samples.
    if (pos >= data.size() || !is_pnm_space(data[pos]))
        throw Error(ErrorKind::Malformed, "missing separator after maxval: " + path.string());
    ++pos;

    const std::size_t expected =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
    const std::size_t available = data.size() - pos;
    if (available < expected)
        throw Error(ErrorKind::TruncatedData,
                    "expected " + std::to_string(expected) + " sample bytes, found " +
                        std::to_string(available) + " in " + path.string());
    if (available > expected)
        throw Error(ErrorKind::Malformed,
                    std::to_string(available - expected) + " trailing bytes after samples in " +
                        path.string());

    Image image;
    image.width = static_cast<int>(width);
    image.height = static_cast<int>(height);
    image.channels = channels;
    image.samples.assign(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end());
    return image;
}

void save_image(const Image& image, const std::filesystem::path& path) {
    validate_image(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << (image.channels == 1 ? "P5" : "P6") << '\n'
        << image.width << ' ' << image.height << '\n'
        << "255" << '\n';
    out.write(reinterpret_cast<const char*>(image.samples.data()),
              static_cast<std::streamsize>(image.samples.size()));
    out.flush();
    if (!out)
        throw Error(ErrorKind::Io, "write failure on " + path.string());
}

Image ingest_convert(const std::filesystem::path& path, const std::string& converter_template) {
    if (converter_template.find("{in}") == std::string::npos ||
        converter_template.find("{out}") == std::string::npos)
        throw Error(ErrorKind::Config,
                    "converter template must contain both {in} and {out} placeholders");

    internal::TempFileGuard out_file(internal::unique_temp_path("platebench-ingest", ".ppm"));
    std::string command = substitute_token(converter_template, "{in}", path.string());
    command = substitute_token(command, "{out}", out_file.path().string());

    log_debug("running converter: " + command);
    const CommandResult result = run_command(command, std::chrono::duration<double>(60.0));
    if (result.timed_out)
        throw Error(ErrorKind::Converter, "converter timed out: " + command);
    if (result.exit_code != 0)
        throw Error(ErrorKind::Converter,
                    "converter exited with status " + std::to_string(result.exit_code));

    try {
        return load_image(out_file.path());
    } catch (const Error& e) {
        throw Error(ErrorKind::Converter,
                    std::string("converter output is not a valid netpbm file (") + e.what() + ")");
    }
}

} // namespace platebench
