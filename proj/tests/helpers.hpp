#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "dct2net/image.hpp"
#include "dct2net/noise.hpp"

namespace testing {

inline dct2net::Image random_image(int h, int w, std::uint64_t seed, double lo = 0.0,
                                   double hi = 255.0) {
    dct2net::Rng rng(seed);
    dct2net::Image img(h, w);
    for (auto& v : img.pixels()) {
        v = rng.uniform(lo, hi);
    }
    return img;
}

// smooth blobs plus an edge, closer to a photo than white noise
inline dct2net::Image smooth_image(int h, int w, std::uint64_t seed) {
    dct2net::Rng rng(seed);
    const double fx = rng.uniform(0.02, 0.1);
    const double fy = rng.uniform(0.02, 0.1);
    const double phase = rng.uniform(0.0, 6.0);
    dct2net::Image img(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            img(r, c) = 120.0 + 60.0 * std::sin(fx * r + phase) * std::cos(fy * c) +
                        (c > w / 2 ? 40.0 : -20.0);
        }
    }
    return img;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    dct2net::Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = rng.uniform(-1.0, 1.0);
    }
    return m;
}

inline double max_abs_diff(const dct2net::Image& a, const dct2net::Image& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a.pixels()[i] - b.pixels()[i]));
    }
    return worst;
}

inline std::filesystem::path tmp_dir(const std::string& name) {
    const auto dir = std::filesystem::path(DCT2NET_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
