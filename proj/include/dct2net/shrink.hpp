#pragma once

#include <Eigen/Dense>

namespace dct2net {

/// Threshold and approximation order of the shrinkage nonlinearity.
/// m == 0 selects the exact hard shrink.
struct ShrinkSpec {
    double lambda = 0.0;
    int m = 0;
};

/// x when |x| > lambda, else 0. |x| == lambda is zeroed (closed interval).
inline double hard_shrink(double x, double lambda) {
    return (x > lambda || x < -lambda) ? x : 0.0;
}

/// x^(2m+1) / (x^(2m) + lambda^(2m)), evaluated without forming the powers.
double smooth_shrink(double x, const ShrinkSpec& spec);

/// x^(2m) / (x^(2m) + lambda^(2m)), the smooth surrogate of 1{|x| > lambda}.
double smooth_indicator(double x, const ShrinkSpec& spec);

/// Value and first derivative of both smooth functions at one point.
struct SmoothShrinkTerms {
    double indicator = 0.0;   // zeta(x)
    double d_indicator = 0.0; // zeta'(x)
    double shrink = 0.0;      // phi(x) = x * zeta(x)
    double d_shrink = 0.0;    // phi'(x)
};

/// Requires m >= 1. At lambda == 0 the shrink is the identity (derivative 1)
/// for every x, and smooth_indicator(0) is defined as 0.
SmoothShrinkTerms smooth_shrink_terms(double x, double lambda, int m);

/// smooth_shrink_terms applied to every entry of `x`, vectorized. Writes the
/// shrunk values, both derivatives, and per-column sums of the indicator.
/// Entries equal those of the scalar function.
void smooth_shrink_block(const Eigen::MatrixXd& x, double lambda, int m, Eigen::MatrixXd& shrunk,
                         Eigen::MatrixXd& d_shrink, Eigen::MatrixXd& d_indicator,
                         Eigen::VectorXd& active);

/// Hard shrink when spec.m == 0, smooth shrink otherwise.
inline double shrink(double x, const ShrinkSpec& spec) {
    return spec.m == 0 ? hard_shrink(x, spec.lambda) : smooth_shrink(x, spec);
}

} // namespace dct2net
