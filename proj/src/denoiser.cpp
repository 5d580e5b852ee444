#include "dct2net/denoiser.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "dct2net/parallel.hpp"

namespace dct2net {

namespace {

// Patch rows per work unit. Fixed so the summation order, and therefore the
// result, does not depend on the number of threads.
constexpr int kBandRows = 16;

struct Accumulator {
    Image num;
    Image den;
};

void check_sigma(double sigma) {
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("noise sigma must be non-negative");
    }
}

int patch_side(const TransformBasis& basis) {
    return PatchGeometry(basis.p()).p();
}

// Runs band_fn(first_row, rows, acc) over bands of the patch grid of `padded`
// and sums the band accumulators in band order.
template <typename BandFn>
Accumulator accumulate_bands(const Image& padded, int p, int threads, BandFn band_fn) {
    const int grid_rows = padded.height() - p + 1;
    const int bands = (grid_rows + kBandRows - 1) / kBandRows;
    std::vector<Accumulator> partial(static_cast<std::size_t>(bands));
    parallel_for(static_cast<std::size_t>(bands), threads, [&](std::size_t b) {
        const int first = static_cast<int>(b) * kBandRows;
        const int rows = std::min(kBandRows, grid_rows - first);
        Accumulator acc{Image(rows + p - 1, padded.width()), Image(rows + p - 1, padded.width())};
        band_fn(first, rows, acc);
        partial[b] = std::move(acc);
    });

    Accumulator total{Image(padded.height(), padded.width()), Image(padded.height(), padded.width())};
    for (int b = 0; b < bands; ++b) {
        const auto& acc = partial[static_cast<std::size_t>(b)];
        const int offset = b * kBandRows;
        for (int r = 0; r < acc.num.height(); ++r) {
            for (int c = 0; c < acc.num.width(); ++c) {
                total.num(offset + r, c) += acc.num(r, c);
                total.den(offset + r, c) += acc.den(r, c);
            }
        }
    }
    return total;
}

Image normalize_and_crop(const Accumulator& acc, int q, int height, int width) {
    Image out(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            out(r, c) = acc.num(r + q, c + q) / acc.den(r + q, c + q);
        }
    }
    return out;
}

} // namespace

double adaptive_weight(const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
    const auto nonzero = (coeffs.array() != 0.0).count();
    return 1.0 / (1.0 + static_cast<double>(nonzero));
}

Image dct_denoise(const Image& img, double sigma, const TransformBasis& basis,
                  AggregationMode mode, std::optional<ShrinkSpec> shrink_spec, int threads) {
    check_sigma(sigma);
    const int p = patch_side(basis);
    const int q = p / 2;
    const ShrinkSpec spec = shrink_spec.value_or(ShrinkSpec{3.0 * sigma, 0});
    if (spec.lambda == 0.0) {
        return img; // every patch estimate is the patch itself
    }
    const Image padded = reflect_pad(img, q);
    const int n = p * p;
    const int grid_cols = padded.width() - p + 1;
    const Eigen::MatrixXd& fwd = basis.inverse();
    const Eigen::MatrixXd& bwd = basis.matrix();

    const auto acc = accumulate_bands(padded, p, threads, [&](int first, int rows, Accumulator& a) {
        Eigen::VectorXd patch(n);
        Eigen::VectorXd coeffs(n);
        Eigen::VectorXd estimate(n);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < grid_cols; ++c) {
                for (int u = 0; u < p; ++u) {
                    for (int v = 0; v < p; ++v) {
                        patch[u * p + v] = padded(first + r + u, c + v);
                    }
                }
                coeffs.noalias() = fwd * patch;
                int kept = 0;
                for (int i = 0; i < n; ++i) {
                    coeffs[i] = shrink(coeffs[i], spec);
                    kept += coeffs[i] != 0.0;
                }
                estimate.noalias() = bwd * coeffs;
                const double w = mode == AggregationMode::adaptive ? 1.0 / (1.0 + kept) : 1.0;
                for (int u = 0; u < p; ++u) {
                    for (int v = 0; v < p; ++v) {
                        a.num(r + u, c + v) += w * estimate[u * p + v];
                        a.den(r + u, c + v) += w;
                    }
                }
            }
        }
    });
    return normalize_and_crop(acc, q, img.height(), img.width());
}

Image dct2net_forward(const Image& img, double sigma, const DenoiserModel& model, Phase phase,
                      int threads) {
    check_sigma(sigma);
    const int p = model.p();
    const int q = p / 2;
    const double lambda = model.threshold_scale() * sigma;
    if (lambda == 0.0) {
        return img;
    }
    const Image padded = reflect_pad(img, q);
    const Eigen::MatrixXd& analysis = model.basis().inverse();
    const Eigen::MatrixXd& synthesis = model.basis().matrix();

    const auto acc = accumulate_bands(padded, p, threads, [&](int first, int rows, Accumulator& a) {
        const Eigen::MatrixXd patches = im2col(padded, p, first, rows);
        Eigen::MatrixXd coeffs = analysis * patches;
        Eigen::VectorXd weights(coeffs.cols());
        if (phase == Phase::eval) {
            for (Eigen::Index t = 0; t < coeffs.cols(); ++t) {
                double* col = coeffs.col(t).data();
                double active = 0.0;
                for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
                    col[i] = hard_shrink(col[i], lambda);
                    active += col[i] != 0.0 ? 1.0 : 0.0;
                }
                weights[t] = 1.0 / (1.0 + active);
            }
        } else {
            Eigen::MatrixXd d_shrink;
            Eigen::MatrixXd d_indicator;
            Eigen::VectorXd active;
            smooth_shrink_block(analysis * patches, lambda, model.m(), coeffs, d_shrink, d_indicator,
                                active);
            weights = (1.0 + active.array()).inverse().matrix();
        }
        const Eigen::MatrixXd estimates = synthesis * coeffs;
        col2im_add(estimates, &weights, p, 0, a.num);
        spread_weights_add(weights, p, 0, a.den);
    });
    return normalize_and_crop(acc, q, img.height(), img.width());
}

PatchStack patch_forward(const Image& img, double sigma, const DenoiserModel& model, Phase phase) {
    check_sigma(sigma);
    const int p = model.p();
    const double lambda = model.threshold_scale() * sigma;
    PatchStack stack = extract_patches(reflect_pad(img, p / 2), p);
    Eigen::MatrixXd coeffs = model.basis().inverse() * stack.values;
    if (phase == Phase::eval) {
        coeffs = coeffs.unaryExpr([lambda](double x) { return hard_shrink(x, lambda); });
    } else {
        const ShrinkSpec spec{lambda, model.m()};
        coeffs = coeffs.unaryExpr([&spec](double x) { return smooth_shrink(x, spec); });
    }
    stack.values.noalias() = model.basis().matrix() * coeffs;
    return stack;
}

Image aggregate_uniform(const PatchStack& stack, int height, int width) {
    const int p = stack.p;
    const int q = p / 2;
    Accumulator acc{Image(stack.grid_rows + p - 1, stack.grid_cols + p - 1),
                    Image(stack.grid_rows + p - 1, stack.grid_cols + p - 1)};
    if (acc.num.height() != height + 2 * q || acc.num.width() != width + 2 * q) {
        throw std::invalid_argument("aggregate_uniform: stack does not come from a padded " +
                                    std::to_string(height) + "x" + std::to_string(width) + " image");
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(stack.count());
    col2im_add(stack.values, nullptr, p, 0, acc.num);
    spread_weights_add(ones, p, 0, acc.den);
    return normalize_and_crop(acc, q, height, width);
}

} // namespace dct2net
