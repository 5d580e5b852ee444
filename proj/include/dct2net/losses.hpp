#pragma once

#include <Eigen/Dense>

#include "dct2net/image.hpp"
#include "dct2net/mask.hpp"
#include "dct2net/patches.hpp"

namespace dct2net {

// All data terms are sums, not means. Each throws std::invalid_argument on a
// shape mismatch.

double loss_mse(const Image& pred, const Image& target);

/// Squared error over pixels where mask is 1.
double loss_masked(const Image& pred, const Image& target, const BinaryMask& mask);

/// beta * sum_ij |(I - P^T P)_ij|.
double loss_ortho_penalty(const Eigen::MatrixXd& basis, double beta);

/// Subgradient of loss_ortho_penalty, with sign(0) = 0.
Eigen::MatrixXd ortho_penalty_gradient(const Eigen::MatrixXd& basis, double beta);

double loss_patch_target(const PatchStack& pred, const PatchStack& clean);

} // namespace dct2net
