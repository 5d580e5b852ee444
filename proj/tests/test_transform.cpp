#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dct2net/error.hpp"
#include "dct2net/shrink.hpp"
#include "dct2net/transform.hpp"
#include "helpers.hpp"

using namespace dct2net;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big_pow(const Big& x, int k) {
    Big out = 1;
    for (int i = 0; i < k; ++i) {
        out *= x;
    }
    return out;
}

// x^(2m+1) / (x^(2m) + l^(2m)) and its derivative, written out literally
Big oracle_shrink(double x, double lambda, int m) {
    const Big bx = x;
    const Big num = big_pow(bx, 2 * m + 1);
    return num / (big_pow(bx, 2 * m) + big_pow(Big(lambda), 2 * m));
}

Big oracle_indicator(double x, double lambda, int m) {
    const Big bx2m = big_pow(Big(x), 2 * m);
    return bx2m / (bx2m + big_pow(Big(lambda), 2 * m));
}

Big oracle_d_indicator(double x, double lambda, int m) {
    const Big bx = x;
    const Big l2m = big_pow(Big(lambda), 2 * m);
    const Big den = big_pow(bx, 2 * m) + l2m;
    return 2 * m * big_pow(bx, 2 * m - 1) * l2m / (den * den);
}

double rel(double value, const Big& truth) {
    const Big diff = abs(Big(value) - truth);
    const Big scale = abs(truth);
    return scale == 0 ? static_cast<double>(diff) : static_cast<double>(diff / scale);
}

Eigen::MatrixXd well_conditioned(int n, std::uint64_t seed) {
    return Eigen::MatrixXd::Identity(n, n) + 0.3 * testing::random_matrix(n, n, seed);
}

Eigen::VectorXd random_patch(int n, std::uint64_t seed) {
    return 127.5 * (testing::random_matrix(n, 1, seed).array() + 1.0).matrix();
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_SUITE("transform") {

TEST_CASE("hard shrink zeroes the closed interval") {
    CHECK(hard_shrink(1.0, 1.0) == 0.0);
    CHECK(hard_shrink(-1.0, 1.0) == 0.0);
    CHECK(hard_shrink(1.0000001, 1.0) == 1.0000001);
    CHECK(hard_shrink(-3.0, 1.0) == -3.0);
    CHECK(hard_shrink(0.5, 0.0) == 0.5);
}

TEST_CASE("smooth shrink matches a 50-digit oracle") {
    const double x = 2.0;
    CHECK(rel(smooth_shrink(x, {1.0, 32}), oracle_shrink(x, 1.0, 32)) < 1e-15);
    CHECK(rel(smooth_shrink(1.05, {1.0, 32}), oracle_shrink(1.05, 1.0, 32)) < 1e-14);
    CHECK(smooth_shrink(1.0, {1.0, 32}) == doctest::Approx(0.5));
    CHECK(smooth_indicator(1.0, {1.0, 32}) == doctest::Approx(0.5));
    dct2net::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const double lambda = rng.uniform(0.5, 150.0);
        const double v = rng.uniform(-3.0, 3.0) * lambda;
        const int m = 1 + static_cast<int>(rng.below(64));
        const SmoothShrinkTerms t = smooth_shrink_terms(v, lambda, m);
        CHECK(rel(t.shrink, oracle_shrink(v, lambda, m)) < 1e-13);
        CHECK(rel(t.indicator, oracle_indicator(v, lambda, m)) < 1e-13);
        const Big d_ind = oracle_d_indicator(v, lambda, m);
        CHECK(rel(t.d_indicator, d_ind) < 1e-12);
        CHECK(rel(t.d_shrink, oracle_indicator(v, lambda, m) + Big(v) * d_ind) < 1e-12);
        CHECK(t.shrink == smooth_shrink(v, {lambda, m}));
    }
}

TEST_CASE("smooth shrink edge cases") {
    CHECK(smooth_shrink(0.0, {1.0, 32}) == 0.0);
    CHECK(smooth_indicator(0.0, {1.0, 4}) == 0.0);
    const SmoothShrinkTerms id = smooth_shrink_terms(7.0, 0.0, 32);
    CHECK(id.shrink == 7.0);
    CHECK(id.d_shrink == 1.0);
    CHECK(smooth_shrink_terms(0.0, 0.0, 32).shrink == 0.0);
    // huge ratios must not overflow
    CHECK(smooth_shrink(1e6, {1e-3, 64}) == 1e6);
    CHECK(smooth_shrink(1e-3, {1e6, 64}) == 0.0);
    CHECK_THROWS(smooth_shrink_terms(1.0, 1.0, 0));
    CHECK_THROWS(smooth_shrink_terms(1.0, -1.0, 3));
    CHECK(shrink(0.5, {1.0, 0}) == 0.0);
}

TEST_CASE("block shrink equals the scalar function entry by entry") {
    Eigen::MatrixXd x = 60.0 * testing::random_matrix(25, 40, 3);
    x(0, 0) = 0.0;
    x(1, 0) = 30.0;
    x(2, 0) = -30.0;
    for (double lambda : {0.0, 30.0, 75.0}) {
        Eigen::MatrixXd s, ds, di;
        Eigen::VectorXd active;
        smooth_shrink_block(x, lambda, 32, s, ds, di, active);
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            double sum = 0.0;
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                const SmoothShrinkTerms t = smooth_shrink_terms(x(r, c), lambda, 32);
                CHECK(s(r, c) == t.shrink);
                CHECK(ds(r, c) == t.d_shrink);
                CHECK(di(r, c) == t.d_indicator);
                sum += t.indicator;
            }
            CHECK(active(c) == doctest::Approx(sum).epsilon(1e-14));
        }
    }
}

TEST_CASE("smooth shrink approaches hard shrink monotonically in m") {
    dct2net::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double lambda = rng.uniform(1.0, 100.0);
        double v = rng.uniform(-2.5, 2.5) * lambda;
        if (std::abs(std::abs(v) - lambda) < 1e-6 * lambda) {
            v *= 1.5;
        }
        double previous = std::numeric_limits<double>::infinity();
        for (int m = 1; m <= 64; ++m) {
            const double err = std::abs(smooth_shrink(v, {lambda, m}) - hard_shrink(v, lambda));
            CHECK(err <= previous + 1e-12);
            previous = err;
        }
    }
}

TEST_CASE("DCT basis is orthonormal and matches the cosine formula") {
    for (int p : {3, 5, 7, 9, 13, 15}) {
        const TransformBasis b = dct_basis(p);
        const Eigen::MatrixXd& m = b.matrix();
        CHECK(max_abs(m.transpose() * m - Eigen::MatrixXd::Identity(p * p, p * p)) < 1e-12);
        CHECK(max_abs(b.inverse() - m.transpose()) < 1e-12);
        const long double pi = 3.141592653589793238462643383279502884L;
        double worst = 0.0;
        for (int x = 0; x < p; ++x) {
            for (int y = 0; y < p; ++y) {
                for (int u = 0; u < p; ++u) {
                    for (int v = 0; v < p; ++v) {
                        const long double au = u == 0 ? 1.0L / std::sqrt(2.0L) : 1.0L;
                        const long double av = v == 0 ? 1.0L / std::sqrt(2.0L) : 1.0L;
                        const long double e = 2.0L / p * au * av *
                                              std::cos((2 * x + 1) * u * pi / (2 * p)) *
                                              std::cos((2 * y + 1) * v * pi / (2 * p));
                        worst = std::max(worst, static_cast<double>(std::abs(
                                                    e - m(x * p + y, u * p + v))));
                    }
                }
            }
        }
        CHECK(worst < 1e-14);
        CHECK(orthogonality_energy(m) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("first DCT atom is constant") {
    const TransformBasis b = dct_basis(5);
    for (int i = 0; i < 25; ++i) {
        CHECK(b.matrix()(i, 0) == doctest::Approx(0.2).epsilon(1e-14));
    }
}

TEST_CASE("transform basis rejects bad matrices") {
    CHECK_THROWS_AS(TransformBasis(Eigen::MatrixXd::Zero(9, 9)), NumericError);
    CHECK_THROWS_AS(TransformBasis(Eigen::MatrixXd::Identity(8, 8)), std::invalid_argument);
    CHECK_THROWS_AS(TransformBasis(Eigen::MatrixXd::Identity(9, 8)), std::invalid_argument);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(9, 9);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(TransformBasis{nan}, NumericError);
    CHECK_THROWS(ThresholdVector(Eigen::VectorXd::Zero(3)));
    CHECK(TransformBasis(Eigen::MatrixXd::Identity(9, 9)).p() == 3);
}

TEST_CASE("lambda = 0 reproduces every patch") {
    const TransformBasis b(well_conditioned(9, 4));
    const Eigen::VectorXd y = random_patch(9, 1);
    CHECK(max_abs(shrink_patch(b, y, 0.0) - y) < 1e-10);
}

TEST_CASE("folded thresholds: one threshold on P diag(t) equals per-atom thresholds on P") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const int n = s % 2 == 0 ? 9 : 25;
        const TransformBasis b(well_conditioned(n, s));
        const Eigen::VectorXd t =
            (0.2 + 1.8 * 0.5 * (testing::random_matrix(n, 1, s + 1000).array() + 1.0)).matrix();
        const double sigma = 5.0 + static_cast<double>(s % 40);
        const Eigen::VectorXd y = random_patch(n, s + 2000);
        const TransformBasis folded = fold_thresholds(b, ThresholdVector(t));
        const Eigen::VectorXd per_atom = shrink_patch(b, y, (sigma * t).eval());
        const Eigen::VectorXd single = shrink_patch(folded, y, sigma);
        CHECK(max_abs(per_atom - single) < 1e-10);
    }
}

TEST_CASE("rescaling the basis absorbs a change of threshold constant") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const TransformBasis b(well_conditioned(9, s + 7));
        const double c = 3.0;
        const double c_new = 0.5 + 0.05 * static_cast<double>(s % 60);
        const double sigma = 1.0 + static_cast<double>(s % 50);
        const Eigen::VectorXd y = random_patch(9, s + 3000);
        const TransformBasis q = rescale_basis(b, c, c_new);
        for (int m : {0, 32}) {
            CHECK(max_abs(shrink_patch(b, y, c * sigma, m) - shrink_patch(q, y, c_new * sigma, m)) <
                  1e-10);
        }
    }
    CHECK_THROWS(rescale_basis(dct_basis(3), 0.0, 1.0));
}

TEST_CASE("M (M^T M)^-1/2 is orthonormal") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const int n = s % 3 == 0 ? 25 : 9;
        const Eigen::MatrixXd m = 2.0 * well_conditioned(n, s + 50);
        const Eigen::MatrixXd p = orthonormal_param(m);
        CHECK(max_abs(p.transpose() * p - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
    }
    const Eigen::MatrixXd dct = dct_basis(5).matrix();
    CHECK(max_abs(orthonormal_param(dct) - dct) < 1e-12);
    CHECK_THROWS_AS(orthonormal_param(Eigen::MatrixXd::Zero(9, 9)), NumericError);
}

TEST_CASE("orthogonal to orthonormal round trip") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const int n = 9;
        const Eigen::MatrixXd q = orthonormal_param(well_conditioned(n, s + 400));
        const Eigen::VectorXd d =
            (0.1 + 4.9 * 0.5 * (testing::random_matrix(n, 1, s + 500).array() + 1.0)).matrix();
        const Eigen::MatrixXd p = q * d.asDiagonal();
        const auto [q2, t] = orthogonal_to_orthonormal(p);
        CHECK(max_abs(q2.transpose() * q2 - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
        CHECK(max_abs(t.values() - d) < 1e-10);
        CHECK(max_abs(q2 * t.values().asDiagonal() - p) < 1e-10);
        // both forms denoise identically: one threshold on P, per-atom on Q
        const double sigma = 20.0;
        const Eigen::VectorXd y = random_patch(n, s + 600);
        const Eigen::VectorXd via_p = shrink_patch(TransformBasis(p), y, sigma);
        const Eigen::VectorXd via_q =
            shrink_patch(TransformBasis(q2), y, (sigma * t.values()).eval());
        CHECK(max_abs(via_p - via_q) < 1e-10);
    }
    CHECK_THROWS_AS(orthogonal_to_orthonormal(well_conditioned(9, 1)), NumericError);
}

TEST_CASE("nearest orthonormal matrix") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Eigen::MatrixXd m = well_conditioned(9, s + 700);
        const Eigen::MatrixXd n1 = nearest_orthonormal(m);
        CHECK(max_abs(n1.transpose() * n1 - Eigen::MatrixXd::Identity(9, 9)) < 1e-10);
        CHECK(max_abs(nearest_orthonormal(n1) - n1) < 1e-10);
        // no orthonormal matrix we can cheaply name is closer
        const double best = (m - n1).norm();
        CHECK(best <= (m - orthonormal_param(m)).norm() + 1e-10);
        CHECK(best <= (m - Eigen::MatrixXd::Identity(9, 9)).norm() + 1e-10);
    }
    const Eigen::MatrixXd dct = dct_basis(3).matrix();
    CHECK(max_abs(nearest_orthonormal(dct) - dct) < 1e-12);
    CHECK_THROWS_AS(nearest_orthonormal(Eigen::MatrixXd::Zero(4, 4)), NumericError);
}

TEST_CASE("SPD square root") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Eigen::MatrixXd m = well_conditioned(9, s + 900);
        const Eigen::MatrixXd a = m.transpose() * m;
        const Eigen::MatrixXd r = matrix_sqrt_spd(a);
        CHECK(max_abs(r * r - a) < 1e-10);
        CHECK(max_abs(r - r.transpose()) < 1e-12);
    }
    Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(matrix_sqrt_spd(neg), NumericError);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(4, 4);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(matrix_sqrt_spd(asym), NumericError);
}

TEST_CASE("orthogonality energy") {
    const Eigen::MatrixXd q = orthonormal_param(well_conditioned(9, 3));
    Eigen::VectorXd d(9);
    d << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    CHECK(orthogonality_energy(q * d.asDiagonal()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(orthogonality_energy(well_conditioned(9, 3)) < 1.0);
}

}
