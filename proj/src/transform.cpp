#include "dct2net/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dct2net/error.hpp"
#include "dct2net/shrink.hpp"

namespace dct2net {

namespace {

constexpr double kMinReciprocalCondition = 1e-12;

void require_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
}

} // namespace

TransformBasis::TransformBasis(Eigen::MatrixXd mat) : mat_(std::move(mat)) {
    require_square(mat_, "TransformBasis");
    const auto n = mat_.rows();
    p_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (static_cast<Eigen::Index>(p_) * p_ != n) {
        throw std::invalid_argument("TransformBasis: size " + std::to_string(n) +
                                    " is not a square patch count");
    }
    if (!mat_.allFinite()) {
        throw NumericError("TransformBasis: matrix has non-finite entries");
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(mat_);
    const double rcond = lu.rcond();
    if (!(rcond >= kMinReciprocalCondition)) {
        throw NumericError("TransformBasis: matrix is singular or ill-conditioned (rcond " +
                           std::to_string(rcond) + ")");
    }
    inv_ = lu.inverse();
    const double residual =
        (inv_ * mat_ - Eigen::MatrixXd::Identity(n, n)).norm();
    if (!(residual < 1e-8)) {
        throw NumericError("TransformBasis: inverse residual " + std::to_string(residual));
    }
}

ThresholdVector::ThresholdVector(Eigen::VectorXd lambdas) : lambdas_(std::move(lambdas)) {
    if (lambdas_.size() == 0 || !(lambdas_.array() > 0.0).all()) {
        throw std::invalid_argument("thresholds must be strictly positive");
    }
}

TransformBasis dct_basis(int p) {
    if (p < 1) {
        throw std::invalid_argument("dct_basis: p must be positive");
    }
    const double pi = std::numbers::pi;
    auto alpha = [](int k) { return k == 0 ? 1.0 / std::numbers::sqrt2 : 1.0; };
    // 1-D orthonormal DCT-II factor, so the 2-D atom is a product of two.
    Eigen::MatrixXd c1(p, p);
    for (int x = 0; x < p; ++x) {
        for (int u = 0; u < p; ++u) {
            c1(x, u) = std::sqrt(2.0 / p) * alpha(u) * std::cos((2 * x + 1) * u * pi / (2.0 * p));
        }
    }
    const int n = p * p;
    Eigen::MatrixXd mat(n, n);
    for (int x = 0; x < p; ++x) {
        for (int y = 0; y < p; ++y) {
            for (int u = 0; u < p; ++u) {
                for (int v = 0; v < p; ++v) {
                    mat(x * p + y, u * p + v) = c1(x, u) * c1(y, v);
                }
            }
        }
    }
    return TransformBasis(std::move(mat));
}

Eigen::VectorXd shrink_patch(const TransformBasis& basis, const Eigen::VectorXd& patch,
                             double lambda, int m) {
    Eigen::VectorXd coeffs = basis.inverse() * patch;
    const ShrinkSpec spec{lambda, m};
    for (auto& c : coeffs) {
        c = shrink(c, spec);
    }
    return basis.matrix() * coeffs;
}

Eigen::VectorXd shrink_patch(const TransformBasis& basis, const Eigen::VectorXd& patch,
                             const Eigen::VectorXd& thresholds) {
    if (thresholds.size() != basis.n()) {
        throw std::invalid_argument("shrink_patch: one threshold per coefficient expected");
    }
    Eigen::VectorXd coeffs = basis.inverse() * patch;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        coeffs[i] = hard_shrink(coeffs[i], thresholds[i]);
    }
    return basis.matrix() * coeffs;
}

TransformBasis rescale_basis(const TransformBasis& basis, double c, double c_new) {
    if (!(c > 0.0) || !(c_new > 0.0)) {
        throw std::invalid_argument("rescale_basis: constants must be positive");
    }
    if (c == c_new) {
        return basis;
    }
    return TransformBasis((c / c_new) * basis.matrix());
}

TransformBasis fold_thresholds(const TransformBasis& basis, const ThresholdVector& tv) {
    if (tv.size() != basis.n()) {
        throw std::invalid_argument("fold_thresholds: one threshold per atom expected");
    }
    return TransformBasis(basis.matrix() * tv.values().asDiagonal());
}

Eigen::MatrixXd matrix_sqrt_spd(const Eigen::MatrixXd& a) {
    require_square(a, "matrix_sqrt_spd");
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NumericError("matrix_sqrt_spd: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success) {
        throw NumericError("matrix_sqrt_spd: eigendecomposition failed");
    }
    const Eigen::VectorXd& mu = eig.eigenvalues();
    if (!(mu.minCoeff() > 0.0)) {
        throw NumericError("matrix_sqrt_spd: matrix is not positive definite");
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    return v * mu.cwiseSqrt().asDiagonal() * v.transpose();
}

Eigen::MatrixXd orthonormal_param(const Eigen::MatrixXd& m) {
    require_square(m, "orthonormal_param");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m);
    if (eig.info() != Eigen::Success) {
        throw NumericError("orthonormal_param: eigendecomposition failed");
    }
    const Eigen::VectorXd& mu = eig.eigenvalues();
    // singular values of M are sqrt(mu)
    if (!(mu.minCoeff() > 0.0) ||
        std::sqrt(mu.minCoeff() / mu.maxCoeff()) < kMinReciprocalCondition) {
        throw NumericError("orthonormal_param: matrix is singular");
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    return m * (v * mu.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose());
}

Eigen::MatrixXd nearest_orthonormal(const Eigen::MatrixXd& p) {
    require_square(p, "nearest_orthonormal");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    if (!(s(s.size() - 1) > kMinReciprocalCondition * s(0))) {
        throw NumericError("nearest_orthonormal: matrix is rank deficient");
    }
    return svd.matrixU() * svd.matrixV().transpose();
}

std::pair<Eigen::MatrixXd, ThresholdVector> orthogonal_to_orthonormal(const Eigen::MatrixXd& p) {
    require_square(p, "orthogonal_to_orthonormal");
    const Eigen::MatrixXd gram = p.transpose() * p;
    const Eigen::VectorXd d = gram.diagonal();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > 0.0)) {
        throw NumericError("orthogonal_to_orthonormal: P^T P has a non-positive diagonal");
    }
    Eigen::MatrixXd off = gram;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() >= 1e-8 * dmax) {
        throw NumericError("orthogonal_to_orthonormal: P^T P is not diagonal");
    }
    const Eigen::VectorXd root = d.cwiseSqrt();
    Eigen::MatrixXd q = p * root.cwiseInverse().asDiagonal();
    return {std::move(q), ThresholdVector(root)};
}

double orthogonality_energy(const Eigen::MatrixXd& p) {
    const Eigen::MatrixXd gram = p.transpose() * p;
    const double total = gram.squaredNorm();
    if (total == 0.0) {
        return 0.0;
    }
    return gram.diagonal().squaredNorm() / total;
}

} // namespace dct2net
