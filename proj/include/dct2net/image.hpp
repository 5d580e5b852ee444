#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dct2net {

/// Grayscale raster, row-major, samples on the 0-255 scale.
///
/// Samples are unconstrained reals: noise and intermediate results may leave
/// [0, 255]; clamping only happens when writing to an 8-bit file.
class Image {
public:
    Image() = default;
    Image(int height, int width, double fill = 0.0);
    Image(int height, int width, std::vector<double> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(int row, int col) { return data_[index(row, col)]; }
    double operator()(int row, int col) const { return data_[index(row, col)]; }

    std::span<double> pixels() { return data_; }
    std::span<const double> pixels() const { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Image& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Odd patch side p >= 3 with half-width q = (p - 1) / 2.
class PatchGeometry {
public:
    explicit PatchGeometry(int p);

    int p() const { return p_; }
    int q() const { return p_ / 2; }
    int n() const { return p_ * p_; }

private:
    int p_;
};

/// 1-based position of the pixel seen at offset (i, j) inside the vectorized
/// p x p patch whose center lies i rows below and j columns right of it:
/// (q - i) * p + q - j + 1.
int patch_index(int i, int j, const PatchGeometry& geom);

/// Mirror padding without repeating the edge sample ("reflect-101").
Image reflect_pad(const Image& img, int border);

/// Sub-image [top, top + height) x [left, left + width).
Image crop(const Image& img, int top, int left, int height, int width);

/// Mirror index into [0, n) without edge repetition, for any integer i.
int reflect_index(int i, int n);

Image transpose(const Image& img);

/// One of the 8 symmetries of the square. 0 is the identity, 1-3 rotate by
/// 90/180/270 degrees counter-clockwise, 4 flips left-right, 5-7 flip then rotate.
Image dihedral(const Image& img, int id);

} // namespace dct2net
