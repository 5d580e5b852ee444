#include "dct2net/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dct2net/error.hpp"

namespace dct2net {

namespace fs = std::filesystem;

std::uint8_t to_byte(double sample) {
    if (!(sample > 0.0)) {
        return 0; // also maps NaN to 0
    }
    if (sample >= 255.0) {
        return 255;
    }
    return static_cast<std::uint8_t>(std::round(sample));
}

namespace {

std::vector<std::uint8_t> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    int next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw FormatError("truncated or malformed PGM header");
        }
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > (1L << 30)) {
                throw FormatError("PGM header value out of range");
            }
            ++pos_;
        }
        return static_cast<int>(value);
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("truncated PGM header");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 2;
};

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
    return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

// IHDR immediately follows the signature: length(4) "IHDR"(4) width(4) height(4)
// bit depth(1) colour type(1).
void check_png_header(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 33 || std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
        throw FormatError("truncated PNG header");
    }
    const int depth = bytes[24];
    const int colour = bytes[25];
    if (colour != 0) {
        throw FormatError("unsupported PNG colour type " + std::to_string(colour) +
                          " (only 8-bit grayscale is accepted)");
    }
    if (depth != 8) {
        throw FormatError("unsupported PNG bit depth " + std::to_string(depth));
    }
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    check_png_header(bytes);
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
        throw FormatError(std::string("PNG: ") + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(image));
    if (png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr) == 0) {
        const std::string message = image.message;
        png_image_free(&image);
        throw FormatError("PNG: " + message);
    }
    return Image(static_cast<int>(image.height), static_cast<int>(image.width),
                 std::vector<double>(raster.begin(), raster.end()));
}

void write_png(const Image& img, const fs::path& path) {
    std::vector<std::uint8_t> raster(img.size());
    std::transform(img.pixels().begin(), img.pixels().end(), raster.begin(), to_byte);
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    if (png_image_write_to_file(&image, path.c_str(), 0, raster.data(), 0, nullptr) == 0) {
        throw IoError("cannot write " + path.string() + ": " + image.message);
    }
}

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

} // namespace

Image decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw FormatError("not a binary PGM (P5) stream");
    }
    PgmHeaderReader header(bytes);
    const int width = header.next_int();
    const int height = header.next_int();
    const int maxval = header.next_int();
    if (width < 1 || height < 1) {
        throw FormatError("PGM dimensions must be positive");
    }
    if (maxval != 255) {
        throw FormatError("unsupported PGM maxval " + std::to_string(maxval) +
                          " (only 8-bit, maxval 255)");
    }
    const std::size_t offset = header.raster_offset();
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < offset + count) {
        throw FormatError("truncated PGM raster");
    }
    return Image(height, width,
                 std::vector<double>(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

std::vector<std::uint8_t> encode_pgm(const Image& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.reserve(bytes.size() + img.size());
    for (double v : img.pixels()) {
        bytes.push_back(to_byte(v));
    }
    return bytes;
}

Image read_image(const fs::path& path) {
    const auto bytes = slurp(path);
    if (has_png_signature(bytes)) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        return decode_pgm(bytes);
    }
    throw FormatError(path.string() + ": neither a P5 PGM nor a PNG file");
}

void write_image(const Image& img, const fs::path& path) {
    if (lower_extension(path) == ".png") {
        write_png(img, path);
        return;
    }
    const auto bytes = encode_pgm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError(dir.string() + " is not a directory");
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = lower_extension(entry.path());
        if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png")) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace dct2net
