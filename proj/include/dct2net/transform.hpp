#pragma once

#include <Eigen/Dense>

#include <utility>

namespace dct2net {

/// Invertible n x n transform (n = p^2) whose columns are the basis atoms,
/// stored together with its inverse.
///
/// Construction rejects matrices whose LU reciprocal condition estimate is
/// below 1e-12, or whose computed inverse misses the identity by more than
/// 1e-8 in Frobenius norm (NumericError).
class TransformBasis {
public:
    explicit TransformBasis(Eigen::MatrixXd mat);

    int p() const { return p_; }
    int n() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    const Eigen::MatrixXd& inverse() const { return inv_; }

private:
    int p_ = 0;
    Eigen::MatrixXd mat_;
    Eigen::MatrixXd inv_;
};

/// Per-coefficient thresholds, all strictly positive.
class ThresholdVector {
public:
    explicit ThresholdVector(Eigen::VectorXd lambdas);
    const Eigen::VectorXd& values() const { return lambdas_; }
    Eigen::Index size() const { return lambdas_.size(); }

private:
    Eigen::VectorXd lambdas_;
};

/// Orthonormal 2-D DCT-II basis for p x p patches. Entry (x p + y, u p + v)
/// (0-based) is (2/p) a(u) a(v) cos((2x+1) u pi / 2p) cos((2y+1) v pi / 2p)
/// with a(0) = 1/sqrt(2), a(k > 0) = 1.
TransformBasis dct_basis(int p);

/// P * shrink(P^-1 y) for one vectorized patch with a single threshold
/// (hard shrink when m == 0).
Eigen::VectorXd shrink_patch(const TransformBasis& basis, const Eigen::VectorXd& patch,
                             double lambda, int m = 0);

/// Same with coefficient i thresholded at thresholds[i] (hard shrink).
Eigen::VectorXd shrink_patch(const TransformBasis& basis, const Eigen::VectorXd& patch,
                             const Eigen::VectorXd& thresholds);

/// Q = (c / c_new) P, so that Q phi_{c_new s}(Q^-1 y) == P phi_{c s}(P^-1 y).
TransformBasis rescale_basis(const TransformBasis& basis, double c, double c_new);

/// P diag(lambda_1..lambda_n): one threshold sigma on the folded basis acts like
/// thresholds lambda_i sigma on the original one.
TransformBasis fold_thresholds(const TransformBasis& basis, const ThresholdVector& tv);

/// The symmetric positive-definite square root, via symmetric eigendecomposition.
Eigen::MatrixXd matrix_sqrt_spd(const Eigen::MatrixXd& a);

/// M (sqrt(M^T M))^-1, always orthonormal for invertible M.
Eigen::MatrixXd orthonormal_param(const Eigen::MatrixXd& m);

/// U V^T from the SVD of P: the closest orthonormal matrix in Frobenius norm.
Eigen::MatrixXd nearest_orthonormal(const Eigen::MatrixXd& p);

/// Splits P with diagonal P^T P = D into Q = P D^-1/2 (orthonormal) and
/// thresholds sqrt(D_ii). Off-diagonal entries of P^T P must stay below
/// 1e-8 max|D|.
std::pair<Eigen::MatrixXd, ThresholdVector> orthogonal_to_orthonormal(const Eigen::MatrixXd& p);

/// sum_i G_ii^2 / sum_ij G_ij^2 with G = P^T P; 1 for orthogonal P.
double orthogonality_energy(const Eigen::MatrixXd& p);

} // namespace dct2net
