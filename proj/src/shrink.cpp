#include "dct2net/shrink.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dct2net {

namespace {

double pow_int(double base, int exponent) {
    double result = 1.0;
    while (exponent > 0) {
        if (exponent & 1) {
            result *= base;
        }
        base *= base;
        exponent >>= 1;
    }
    return result;
}

} // namespace

SmoothShrinkTerms smooth_shrink_terms(double x, double lambda, int m) {
    if (m < 1) {
        throw std::invalid_argument("smooth shrink needs m >= 1");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("shrink threshold must be non-negative");
    }
    SmoothShrinkTerms out;
    if (lambda == 0.0) {
        out.indicator = x == 0.0 ? 0.0 : 1.0;
        out.shrink = x;
        out.d_shrink = 1.0;
        return out;
    }
    if (x == 0.0) {
        return out;
    }

    // With a = |x|, t = (min(a, lambda) / max(a, lambda))^(2m) lies in (0, 1],
    // so neither branch can overflow. r = (a / lambda)^(2m) is t or 1 / t and
    // r / (1 + r)^2 is invariant under r -> 1 / r.
    const double a = std::abs(x);
    const bool above = a > lambda;
    const double ratio = above ? lambda / a : a / lambda;
    const double t = pow_int(ratio, 2 * m);
    const double g = t / ((1.0 + t) * (1.0 + t));

    out.indicator = above ? 1.0 / (1.0 + t) : t / (1.0 + t);
    out.shrink = x * out.indicator;
    out.d_indicator = 2.0 * m * g / x;
    out.d_shrink = out.indicator + 2.0 * m * g;
    return out;
}

void smooth_shrink_block(const Eigen::MatrixXd& x, double lambda, int m, Eigen::MatrixXd& shrunk,
                         Eigen::MatrixXd& d_shrink, Eigen::MatrixXd& d_indicator,
                         Eigen::VectorXd& active) {
    if (m < 1) {
        throw std::invalid_argument("smooth shrink needs m >= 1");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("shrink threshold must be non-negative");
    }
    const Eigen::Index rows = x.rows();
    shrunk.resize(rows, x.cols());
    d_shrink.resize(rows, x.cols());
    d_indicator.resize(rows, x.cols());
    active.resize(x.cols());
    if (lambda == 0.0) {
        shrunk = x;
        d_shrink.setOnes();
        d_indicator.setZero();
        active = (x.array() != 0.0).cast<double>().colwise().sum().transpose();
        return;
    }
    const double two_m = 2.0 * m;
    std::vector<double> base(static_cast<std::size_t>(rows));
    std::vector<double> t(static_cast<std::size_t>(rows));
    // Column by column, with the same operations as smooth_shrink_terms so
    // the entries agree bit for bit. The loops are branch-free to vectorize.
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double* xs = x.col(c).data();
        double* sh = shrunk.col(c).data();
        double* ds = d_shrink.col(c).data();
        double* di = d_indicator.col(c).data();
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double a = std::abs(xs[i]);
            base[i] = (a > lambda ? lambda : a) / (a > lambda ? a : lambda);
            t[i] = 1.0;
        }
        for (int e = 2 * m; e > 0; e >>= 1) {
            if (e & 1) {
                for (Eigen::Index i = 0; i < rows; ++i) {
                    t[i] *= base[i];
                }
            }
            for (Eigen::Index i = 0; i < rows; ++i) {
                base[i] *= base[i];
            }
        }
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double xi = xs[i];
            const double ti = t[i];
            const double numerator = std::abs(xi) > lambda ? 1.0 : ti;
            const double indicator = numerator / (1.0 + ti);
            const double g = ti / ((1.0 + ti) * (1.0 + ti));
            const double denominator = xi == 0.0 ? 1.0 : xi;
            const double slope = two_m * g / denominator;
            sh[i] = xi * indicator;
            ds[i] = indicator + two_m * g;
            di[i] = xi == 0.0 ? 0.0 : slope;
            base[i] = indicator;
        }
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            sum += base[i];
        }
        active[c] = sum;
    }
}

double smooth_shrink(double x, const ShrinkSpec& spec) {
    return smooth_shrink_terms(x, spec.lambda, spec.m).shrink;
}

double smooth_indicator(double x, const ShrinkSpec& spec) {
    return smooth_shrink_terms(x, spec.lambda, spec.m).indicator;
}

} // namespace dct2net
