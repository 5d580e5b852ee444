#pragma once

#include <Eigen/Dense>

namespace dct2net {

struct OptimizerState {
    OptimizerState(Eigen::Index rows, Eigen::Index cols)
        : first_moment(Eigen::MatrixXd::Zero(rows, cols)),
          second_moment(Eigen::MatrixXd::Zero(rows, cols)) {}

    Eigen::MatrixXd first_moment;
    Eigen::MatrixXd second_moment;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(Eigen::MatrixXd& params, const Eigen::MatrixXd& grad, OptimizerState& state,
               double lr);

} // namespace dct2net
