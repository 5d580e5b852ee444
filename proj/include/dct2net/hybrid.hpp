#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dct2net/classifier.hpp"
#include "dct2net/denoiser.hpp"
#include "dct2net/mask.hpp"
#include "dct2net/model.hpp"

namespace dct2net {

struct HybridConfig {
    explicit HybridConfig(DenoiserModel m) : model(std::move(m)) {}

    CannyParams canny;
    DenoiserModel model;
    AggregationMode dct_mode = AggregationMode::adaptive;
    // Classify the rough DCT output and reuse it on flat pixels. When false,
    // the flat-pixel DCT pass is recomputed (identical result, for timing).
    bool reuse_dct = true;
    // Replaces the Canny mask when set (debugging and bracketing).
    std::optional<BinaryMask> mask_override;
    int threads = 0;
};

struct HybridResult {
    Image image;
    BinaryMask mask;
    Image dct;     // rough pass, used where mask == 0
    Image learned; // model output, used where mask == 1
};

/// out = mask ? dct2net(img) : dct(img), with the mask computed by Canny on
/// the DCT output.
HybridResult hybrid_denoise(const Image& img, double sigma, const HybridConfig& cfg);

/// Per-pixel selection; throws std::invalid_argument on shape mismatch.
Image compose(const BinaryMask& mask, const Image& flat, const Image& complex);

/// Dilation size; kAllComplex stands for an infinite kernel (mask all ones).
inline constexpr int kAllComplex = std::numeric_limits<int>::max();

struct SweepRow {
    int dilation;
    double psnr;
};

/// PSNR of the hybrid output against `clean` for each dilation size. The two
/// denoiser passes and the edge map are computed once.
std::vector<SweepRow> dilation_sweep(const Image& noisy, const Image& clean, double sigma,
                                     const HybridConfig& cfg, std::span<const int> sizes);

} // namespace dct2net
