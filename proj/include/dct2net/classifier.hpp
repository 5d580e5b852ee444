#pragma once

#include "dct2net/image.hpp"
#include "dct2net/mask.hpp"

namespace dct2net {

/// Thresholds are on the [0, 1] intensity scale; the image is divided by 255.
struct CannyParams {
    double gauss_sigma = 1.0;
    double low = 0.1;
    double high = 0.2;
    int dilation = 5; // odd side of the square structuring element

    /// Throws std::invalid_argument on negative or inverted thresholds, a
    /// non-positive blur or an even dilation.
    void validate() const;
};

/// Canny edge pixels before dilation: Gaussian blur (radius 3 sigma, reflect
/// borders), 3x3 Sobel, 4-direction non-maximum suppression, double threshold
/// and hysteresis over 8-connected neighbours.
BinaryMask canny_edges(const Image& img, const CannyParams& params);

/// canny_edges followed by dilation with params.dilation.
BinaryMask canny_mask(const Image& img, const CannyParams& params = {});

/// Dilation by a k x k square of ones. k must be odd.
BinaryMask dilate(const BinaryMask& mask, int k);

/// Local total variation: sum over a window x window neighbourhood of
/// |forward x-difference| + |forward y-difference|, reflect borders.
Image tv_map(const Image& img, int window);

/// 1 where the local TV strictly exceeds the given percentile of all TV values.
BinaryMask tv_mask(const Image& img, int window = 7, double percentile = 0.75);

} // namespace dct2net
