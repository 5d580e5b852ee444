#include "dct2net/hybrid.hpp"

#include <stdexcept>

#include "dct2net/metrics.hpp"

namespace dct2net {

Image compose(const BinaryMask& mask, const Image& flat, const Image& complex) {
    if (!flat.same_shape(complex) || !mask.same_shape(flat)) {
        throw std::invalid_argument("compose: mask and images differ in shape");
    }
    Image out(flat.height(), flat.width());
    for (int r = 0; r < out.height(); ++r) {
        for (int c = 0; c < out.width(); ++c) {
            out(r, c) = mask(r, c) ? complex(r, c) : flat(r, c);
        }
    }
    return out;
}

HybridResult hybrid_denoise(const Image& img, double sigma, const HybridConfig& cfg) {
    const TransformBasis dct = dct_basis(cfg.model.p());
    Image rough = dct_denoise(img, sigma, dct, cfg.dct_mode, std::nullopt, cfg.threads);
    BinaryMask mask = cfg.mask_override ? *cfg.mask_override : canny_mask(rough, cfg.canny);
    if (!cfg.reuse_dct) {
        rough = dct_denoise(img, sigma, dct, cfg.dct_mode, std::nullopt, cfg.threads);
    }
    Image learned = dct2net_forward(img, sigma, cfg.model, Phase::eval, cfg.threads);
    Image out = compose(mask, rough, learned);
    return HybridResult{std::move(out), std::move(mask), std::move(rough), std::move(learned)};
}

std::vector<SweepRow> dilation_sweep(const Image& noisy, const Image& clean, double sigma,
                                     const HybridConfig& cfg, std::span<const int> sizes) {
    const TransformBasis dct = dct_basis(cfg.model.p());
    const Image rough = dct_denoise(noisy, sigma, dct, cfg.dct_mode, std::nullopt, cfg.threads);
    const Image learned = dct2net_forward(noisy, sigma, cfg.model, Phase::eval, cfg.threads);
    const BinaryMask edges = canny_edges(rough, cfg.canny);
    std::vector<SweepRow> rows;
    for (const int size : sizes) {
        const BinaryMask mask = size == kAllComplex ? BinaryMask(noisy.height(), noisy.width(), true)
                                                    : dilate(edges, size);
        rows.push_back(SweepRow{size, psnr(compose(mask, rough, learned), clean)});
    }
    return rows;
}

} // namespace dct2net
