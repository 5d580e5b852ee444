#include "dct2net/image.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dct2net {

Image::Image(int height, int width, double fill)
    : height_(height), width_(width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("image dimensions must be positive, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
    }
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Image::Image(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw std::invalid_argument("image data length does not match height x width");
    }
}

PatchGeometry::PatchGeometry(int p) : p_(p) {
    if (p < 3 || p % 2 == 0) {
        throw std::invalid_argument("patch side must be odd and >= 3, got " + std::to_string(p));
    }
}

int patch_index(int i, int j, const PatchGeometry& geom) {
    const int q = geom.q();
    if (i < -q || i > q || j < -q || j > q) {
        throw std::out_of_range("patch offset outside [-q, q]");
    }
    return (q - i) * geom.p() + q - j + 1;
}

int reflect_index(int i, int n) {
    if (n == 1) {
        return 0;
    }
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

Image reflect_pad(const Image& img, int border) {
    if (border < 0) {
        throw std::invalid_argument("padding border must be non-negative");
    }
    if (border == 0) {
        return img;
    }
    if (border >= std::min(img.height(), img.width())) {
        throw std::invalid_argument("padding border " + std::to_string(border) +
                                    " too large for a " + std::to_string(img.height()) + "x" +
                                    std::to_string(img.width()) + " image");
    }
    Image out(img.height() + 2 * border, img.width() + 2 * border);
    for (int r = 0; r < out.height(); ++r) {
        const int sr = reflect_index(r - border, img.height());
        for (int c = 0; c < out.width(); ++c) {
            out(r, c) = img(sr, reflect_index(c - border, img.width()));
        }
    }
    return out;
}

Image crop(const Image& img, int top, int left, int height, int width) {
    if (top < 0 || left < 0 || height < 1 || width < 1 || top + height > img.height() ||
        left + width > img.width()) {
        throw std::out_of_range("crop window outside image");
    }
    Image out(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            out(r, c) = img(top + r, left + c);
        }
    }
    return out;
}

Image transpose(const Image& img) {
    Image out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            out(c, r) = img(r, c);
        }
    }
    return out;
}

namespace {

Image rotate90(const Image& img) {
    // counter-clockwise: out(r, c) = img(c, W - 1 - r)
    Image out(img.width(), img.height());
    for (int r = 0; r < out.height(); ++r) {
        for (int c = 0; c < out.width(); ++c) {
            out(r, c) = img(c, img.width() - 1 - r);
        }
    }
    return out;
}

Image flip_lr(const Image& img) {
    Image out(img.height(), img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            out(r, c) = img(r, img.width() - 1 - c);
        }
    }
    return out;
}

} // namespace

Image dihedral(const Image& img, int id) {
    if (id < 0 || id > 7) {
        throw std::invalid_argument("dihedral id must be in [0, 7]");
    }
    Image out = id >= 4 ? flip_lr(img) : img;
    for (int k = 0; k < id % 4; ++k) {
        out = rotate90(out);
    }
    return out;
}

} // namespace dct2net
