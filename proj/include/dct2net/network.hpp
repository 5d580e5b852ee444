#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "dct2net/image.hpp"
#include "dct2net/mask.hpp"

namespace dct2net {

/// One training pair. mask is only read by the masked loss.
struct TrainSample {
    Image noisy;
    Image clean;
    double sigma = 0.0;
    std::optional<BinaryMask> mask;
};

/// What the train-phase forward computes and which data term it scores.
struct NetworkSettings {
    int m = 32;
    double threshold_scale = 3.0;
    bool patch_target = false; // score patch reconstructions instead of pixels
    bool use_mask = false;     // restrict the pixel loss to mask == 1
};

struct LossGradient {
    double loss = 0.0;
    Eigen::MatrixXd grad; // empty when only the loss was requested
};

/// Data-term loss of one sample under the train-phase forward (smooth shrink,
/// smooth aggregation weights) and, if requested, its exact gradient with
/// respect to every entry of `basis`. `inverse` must be basis^-1.
LossGradient data_loss_and_gradient(const TrainSample& sample, const Eigen::MatrixXd& basis,
                                    const Eigen::MatrixXd& inverse,
                                    const NetworkSettings& settings, bool with_gradient);

/// Sum over samples, parallel over samples, reduced in sample order.
LossGradient batch_data_loss_and_gradient(std::span<const TrainSample> batch,
                                          const Eigen::MatrixXd& basis,
                                          const NetworkSettings& settings, bool with_gradient,
                                          int threads = 0);

/// Pulls dL/dP back through P = M (M^T M)^(-1/2) to dL/dM.
Eigen::MatrixXd orthonormal_param_backward(const Eigen::MatrixXd& m, const Eigen::MatrixXd& grad_p);

/// Straightforward extended-precision evaluation of the same data term, one
/// patch at a time. Used as the finite-difference oracle.
long double reference_data_loss(std::span<const TrainSample> batch,
                                const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>& basis,
                                const NetworkSettings& settings);

} // namespace dct2net
