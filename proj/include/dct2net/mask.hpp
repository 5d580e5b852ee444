#pragma once

#include <cstdint>
#include <vector>

#include "dct2net/image.hpp"

namespace dct2net {

/// Per-pixel flat (0) / complex (1) labels.
class BinaryMask {
public:
    BinaryMask(int height, int width, bool value = false);
    /// Nonzero samples become 1.
    static BinaryMask from_image(const Image& img);

    int height() const { return height_; }
    int width() const { return width_; }
    bool operator()(int row, int col) const { return bits_[index(row, col)] != 0; }
    void set(int row, int col, bool value) { bits_[index(row, col)] = value ? 1 : 0; }
    std::size_t count() const;
    bool same_shape(const Image& img) const {
        return img.height() == height_ && img.width() == width_;
    }

    /// 0 -> 0.0, 1 -> 1.0 (scale 255 for export).
    Image to_image(double on_value = 1.0) const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int height_;
    int width_;
    std::vector<std::uint8_t> bits_;
};

} // namespace dct2net
