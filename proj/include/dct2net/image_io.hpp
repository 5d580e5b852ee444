#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dct2net/image.hpp"

namespace dct2net {

/// Reads an 8-bit grayscale binary PGM (P5, maxval 255) or 8-bit grayscale
/// PNG. The format is detected from the file signature, not the extension.
/// Throws IoError when the file cannot be read and FormatError for anything
/// else (truncation, colour, 16-bit, ...).
Image read_image(const std::filesystem::path& path);

/// Writes an 8-bit P5 PGM, or PNG when the extension is ".png".
/// Samples are clamped to [0, 255] and rounded half away from zero.
void write_image(const Image& img, const std::filesystem::path& path);

/// The byte a sample maps to at write time.
std::uint8_t to_byte(double sample);

/// Decodes P5 bytes held in memory.
Image decode_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pgm(const Image& img);

/// Image files (.pgm, .png) directly inside dir, sorted by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

} // namespace dct2net
