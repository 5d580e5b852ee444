#include "dct2net/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace dct2net {

namespace {

void check_shapes(const Image& pred, const Image& target) {
    if (!pred.same_shape(target)) {
        throw std::invalid_argument("loss: prediction and target differ in shape");
    }
}

double sign(double x) {
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

} // namespace

double loss_mse(const Image& pred, const Image& target) {
    check_shapes(pred, target);
    const auto a = pred.pixels();
    const auto b = target.pixels();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double loss_masked(const Image& pred, const Image& target, const BinaryMask& mask) {
    check_shapes(pred, target);
    if (!mask.same_shape(pred)) {
        throw std::invalid_argument("loss: mask differs in shape from the images");
    }
    double sum = 0.0;
    for (int r = 0; r < pred.height(); ++r) {
        for (int c = 0; c < pred.width(); ++c) {
            if (mask(r, c)) {
                const double d = pred(r, c) - target(r, c);
                sum += d * d;
            }
        }
    }
    return sum;
}

double loss_ortho_penalty(const Eigen::MatrixXd& basis, double beta) {
    if (beta < 0.0) {
        throw std::invalid_argument("ortho penalty weight must be non-negative");
    }
    if (beta == 0.0) {
        return 0.0;
    }
    const Eigen::MatrixXd gap =
        Eigen::MatrixXd::Identity(basis.cols(), basis.cols()) - basis.transpose() * basis;
    return beta * gap.cwiseAbs().sum();
}

Eigen::MatrixXd ortho_penalty_gradient(const Eigen::MatrixXd& basis, double beta) {
    if (beta == 0.0) {
        return Eigen::MatrixXd::Zero(basis.rows(), basis.cols());
    }
    const Eigen::MatrixXd gap =
        Eigen::MatrixXd::Identity(basis.cols(), basis.cols()) - basis.transpose() * basis;
    // d/dP sum |E_ij| with E = I - P^T P is -P (S + S^T), S = sign(E); E is
    // symmetric so S + S^T = 2S.
    return -2.0 * beta * basis * gap.unaryExpr([](double x) { return sign(x); });
}

double loss_patch_target(const PatchStack& pred, const PatchStack& clean) {
    if (pred.values.rows() != clean.values.rows() || pred.values.cols() != clean.values.cols()) {
        throw std::invalid_argument("loss: patch stacks differ in shape");
    }
    return (pred.values - clean.values).squaredNorm();
}

} // namespace dct2net
