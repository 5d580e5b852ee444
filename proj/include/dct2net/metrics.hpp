#pragma once

#include "dct2net/image.hpp"

namespace dct2net {

/// Mean squared error; throws std::invalid_argument on shape mismatch.
double mse(const Image& a, const Image& b);

/// 10 log10(peak^2 / MSE) on unclamped samples; +inf when the images are equal.
double psnr(const Image& a, const Image& b, double peak = 255.0);

} // namespace dct2net
