#pragma once

#include <optional>

#include <Eigen/Dense>

#include "dct2net/image.hpp"
#include "dct2net/model.hpp"
#include "dct2net/patches.hpp"
#include "dct2net/shrink.hpp"
#include "dct2net/transform.hpp"

namespace dct2net {

enum class AggregationMode {
    uniform,  // plain mean of the p^2 estimates of each pixel
    adaptive, // estimates weighted by (1 + surviving coefficients)^-1
};

/// eval: hard shrink and exact l0 weights. train: smooth shrink of order
/// model.m() and weights (1 + sum_i zeta(c_i))^-1.
enum class Phase { train, eval };

/// (1 + number of non-zero entries)^-1.
double adaptive_weight(const Eigen::Ref<const Eigen::VectorXd>& coeffs);

/// Sliding-window transform-domain denoiser, implemented patch by patch.
///
/// The image is reflect-padded by q so every output pixel aggregates exactly
/// p^2 estimates. Without an explicit shrink spec the hard threshold is 3 sigma.
/// A zero threshold returns the input unchanged, the exact value of P P^-1 y.
/// Throws std::invalid_argument for sigma < 0.
Image dct_denoise(const Image& img, double sigma, const TransformBasis& basis,
                  AggregationMode mode, std::optional<ShrinkSpec> shrink = std::nullopt,
                  int threads = 0);

/// The same computation laid out as a two-layer network: im2col, analysis by
/// P^-1, shrinkage, synthesis by P, weight map, scatter-add and normalization.
/// The threshold is model.threshold_scale() * sigma.
Image dct2net_forward(const Image& img, double sigma, const DenoiserModel& model, Phase phase,
                      int threads = 0);

/// Per-patch reconstructions P shrink(P^-1 y) of the reflect-padded image,
/// without aggregation.
PatchStack patch_forward(const Image& img, double sigma, const DenoiserModel& model, Phase phase);

/// Uniform average of a padded-image patch stack, cropped back to
/// height x width.
Image aggregate_uniform(const PatchStack& stack, int height, int width);

} // namespace dct2net
