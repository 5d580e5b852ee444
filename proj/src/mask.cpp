#include "dct2net/mask.hpp"

#include <algorithm>
#include <stdexcept>

namespace dct2net {

BinaryMask::BinaryMask(int height, int width, bool value)
    : height_(height), width_(width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("mask dimensions must be positive");
    }
    bits_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
                 value ? 1 : 0);
}

BinaryMask BinaryMask::from_image(const Image& img) {
    BinaryMask mask(img.height(), img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            mask.set(r, c, img(r, c) != 0.0);
        }
    }
    return mask;
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

Image BinaryMask::to_image(double on_value) const {
    Image img(height_, width_);
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            img(r, c) = (*this)(r, c) ? on_value : 0.0;
        }
    }
    return img;
}

} // namespace dct2net
