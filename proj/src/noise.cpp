#include "dct2net/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dct2net {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("Rng::below needs n > 0");
    }
    // rejection sampling keeps the result exactly uniform
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw = engine_();
    while (draw >= limit) {
        draw = engine_();
    }
    return draw % n;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Image add_gaussian_noise(const Image& img, const NoiseSpec& spec) {
    if (spec.sigma < 0.0) {
        throw std::invalid_argument("noise sigma must be non-negative");
    }
    Image out = img;
    if (spec.sigma == 0.0) {
        return out;
    }
    Rng rng(spec.seed);
    for (double& v : out.pixels()) {
        v += spec.sigma * rng.gaussian();
    }
    return out;
}

} // namespace dct2net
