#include "dct2net/network.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dct2net/parallel.hpp"
#include "dct2net/patches.hpp"
#include "dct2net/shrink.hpp"

namespace dct2net {

namespace {

int side_of(Eigen::Index n) {
    const int p = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (p * p != n || p % 2 == 0) {
        throw std::invalid_argument("basis size is not the square of an odd patch side");
    }
    return p;
}

void check_sample(const TrainSample& s, const NetworkSettings& settings) {
    if (!s.noisy.same_shape(s.clean)) {
        throw std::invalid_argument("training sample: noisy and clean differ in shape");
    }
    if (!(s.sigma >= 0.0)) {
        throw std::invalid_argument("training sample: negative sigma");
    }
    if (settings.use_mask && (!s.mask || !s.mask->same_shape(s.clean))) {
        throw std::invalid_argument("training sample: masked loss needs a mask of image shape");
    }
}

} // namespace

LossGradient data_loss_and_gradient(const TrainSample& sample, const Eigen::MatrixXd& basis,
                                    const Eigen::MatrixXd& inverse,
                                    const NetworkSettings& settings, bool with_gradient) {
    check_sample(sample, settings);
    const int p = side_of(basis.rows());
    const int q = p / 2;
    const int height = sample.clean.height();
    const int width = sample.clean.width();
    const double lambda = settings.threshold_scale * sample.sigma;

    const Image noisy = reflect_pad(sample.noisy, q);
    const Eigen::MatrixXd patches = im2col(noisy, p, 0, height);

    Eigen::MatrixXd coeffs = inverse * patches;
    Eigen::MatrixXd shrunk;
    Eigen::MatrixXd d_shrink;
    Eigen::MatrixXd d_indicator;
    Eigen::VectorXd active;
    smooth_shrink_block(coeffs, lambda, settings.m, shrunk, d_shrink, d_indicator, active);
    const Eigen::VectorXd weights = (1.0 + active.array()).inverse().matrix();
    const Eigen::MatrixXd recon = basis * shrunk;

    LossGradient out;
    Eigen::MatrixXd d_recon;
    Eigen::VectorXd d_weights;
    if (settings.patch_target) {
        const Eigen::MatrixXd target = im2col(reflect_pad(sample.clean, q), p, 0, height);
        d_recon = recon - target;
        out.loss = d_recon.squaredNorm();
        if (!with_gradient) {
            return out;
        }
        d_recon *= 2.0;
    } else {
        Image num(noisy.height(), noisy.width());
        Image den(noisy.height(), noisy.width());
        col2im_add(recon, &weights, p, 0, num);
        spread_weights_add(weights, p, 0, den);
        Image estimate(noisy.height(), noisy.width());
        for (int r = 0; r < noisy.height(); ++r) {
            for (int c = 0; c < noisy.width(); ++c) {
                estimate(r, c) = num(r, c) / den(r, c);
            }
        }
        // upstream gradient of the loss w.r.t. num, zero on the padding
        Image upstream(noisy.height(), noisy.width());
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                if (settings.use_mask && !(*sample.mask)(r, c)) {
                    continue;
                }
                const double d = estimate(r + q, c + q) - sample.clean(r, c);
                out.loss += d * d;
                upstream(r + q, c + q) = 2.0 * d / den(r + q, c + q);
            }
        }
        if (!with_gradient) {
            return out;
        }
        d_recon = im2col(upstream, p, 0, height);
        const Eigen::MatrixXd gathered = im2col(estimate, p, 0, height);
        d_weights = d_recon.cwiseProduct(recon - gathered).colwise().sum().transpose();
        d_recon.array().rowwise() *= weights.transpose().array();
    }

    out.grad.noalias() = d_recon * shrunk.transpose();
    Eigen::MatrixXd& d_coeffs = coeffs; // reuse storage
    d_coeffs.noalias() = basis.transpose() * d_recon;
    d_coeffs.array() *= d_shrink.array();
    if (!settings.patch_target) {
        // w = 1 / (1 + S) so dL/dS = -w^2 dL/dw
        const Eigen::VectorXd d_active = -weights.array().square() * d_weights.array();
        d_coeffs += d_indicator * d_active.asDiagonal();
    }
    const Eigen::MatrixXd d_inverse = d_coeffs * patches.transpose();
    out.grad.noalias() -= inverse.transpose() * d_inverse * inverse.transpose();
    return out;
}

LossGradient batch_data_loss_and_gradient(std::span<const TrainSample> batch,
                                          const Eigen::MatrixXd& basis,
                                          const NetworkSettings& settings, bool with_gradient,
                                          int threads) {
    const Eigen::MatrixXd inverse = basis.inverse();
    std::vector<LossGradient> parts(batch.size());
    parallel_for(batch.size(), threads, [&](std::size_t i) {
        parts[i] = data_loss_and_gradient(batch[i], basis, inverse, settings, with_gradient);
    });
    LossGradient total;
    if (with_gradient) {
        total.grad = Eigen::MatrixXd::Zero(basis.rows(), basis.cols());
    }
    for (const auto& part : parts) {
        total.loss += part.loss;
        if (with_gradient) {
            total.grad += part.grad;
        }
    }
    return total;
}

Eigen::MatrixXd orthonormal_param_backward(const Eigen::MatrixXd& m, const Eigen::MatrixXd& grad_p) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("orthonormal parameterization needs an invertible matrix");
    }
    const Eigen::MatrixXd& vecs = eig.eigenvectors();
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseSqrt();
    const Eigen::Index n = roots.size();
    const Eigen::MatrixXd inv_sqrt = vecs * roots.cwiseInverse().asDiagonal() * vecs.transpose();

    // divided differences of x^(-1/2) at the eigenvalues, exact on the diagonal too
    Eigen::MatrixXd divided(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            divided(i, j) = -1.0 / (roots[i] * roots[j] * (roots[i] + roots[j]));
        }
    }
    const Eigen::MatrixXd grad_inv_sqrt = m.transpose() * grad_p;
    const Eigen::MatrixXd grad_gram =
        vecs * divided.cwiseProduct(vecs.transpose() * grad_inv_sqrt * vecs) * vecs.transpose();
    return grad_p * inv_sqrt + m * (grad_gram + grad_gram.transpose());
}

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// indicator value of the smooth shrink, in extended precision
long double smooth_indicator_ld(long double x, long double lambda, int m) {
    if (lambda == 0.0L) {
        return x == 0.0L ? 0.0L : 1.0L;
    }
    if (x == 0.0L) {
        return 0.0L;
    }
    const long double a = std::fabs(x);
    const bool above = a > lambda;
    const long double t = std::pow(above ? lambda / a : a / lambda, 2 * m);
    return above ? 1.0L / (1.0L + t) : t / (1.0L + t);
}

} // namespace

long double reference_data_loss(std::span<const TrainSample> batch, const LongMatrix& basis,
                                const NetworkSettings& settings) {
    const int p = side_of(basis.rows());
    const int q = p / 2;
    const Eigen::Index n = basis.rows();
    const LongMatrix inverse = basis.inverse();
    long double total = 0.0L;
    for (const auto& s : batch) {
        check_sample(s, settings);
        const long double lambda =
            static_cast<long double>(settings.threshold_scale) * static_cast<long double>(s.sigma);
        const Image noisy = reflect_pad(s.noisy, q);
        const Image clean = reflect_pad(s.clean, q);
        const int hp = noisy.height();
        const int wp = noisy.width();
        std::vector<long double> num(static_cast<std::size_t>(hp * wp), 0.0L);
        std::vector<long double> den(num.size(), 0.0L);
        Eigen::Matrix<long double, Eigen::Dynamic, 1> patch(n);
        Eigen::Matrix<long double, Eigen::Dynamic, 1> target(n);
        for (int r = 0; r + p <= hp; ++r) {
            for (int c = 0; c + p <= wp; ++c) {
                for (int u = 0; u < p; ++u) {
                    for (int v = 0; v < p; ++v) {
                        patch[u * p + v] = noisy(r + u, c + v);
                        target[u * p + v] = clean(r + u, c + v);
                    }
                }
                Eigen::Matrix<long double, Eigen::Dynamic, 1> coeffs = inverse * patch;
                long double active = 0.0L;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const long double z = smooth_indicator_ld(coeffs[i], lambda, settings.m);
                    coeffs[i] *= z;
                    active += z;
                }
                const Eigen::Matrix<long double, Eigen::Dynamic, 1> recon = basis * coeffs;
                if (settings.patch_target) {
                    total += (recon - target).squaredNorm();
                    continue;
                }
                const long double w = 1.0L / (1.0L + active);
                for (int u = 0; u < p; ++u) {
                    for (int v = 0; v < p; ++v) {
                        const std::size_t k = static_cast<std::size_t>((r + u) * wp + c + v);
                        num[k] += w * recon[u * p + v];
                        den[k] += w;
                    }
                }
            }
        }
        if (settings.patch_target) {
            continue;
        }
        for (int r = 0; r < s.clean.height(); ++r) {
            for (int c = 0; c < s.clean.width(); ++c) {
                if (settings.use_mask && !(*s.mask)(r, c)) {
                    continue;
                }
                const std::size_t k = static_cast<std::size_t>((r + q) * wp + c + q);
                const long double d = num[k] / den[k] - static_cast<long double>(s.clean(r, c));
                total += d * d;
            }
        }
    }
    return total;
}

} // namespace dct2net
