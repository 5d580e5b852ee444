#pragma once

#include <cstdint>
#include <random>

#include "dct2net/image.hpp"

namespace dct2net {

/// Portable seeded generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits of one draw; Gaussians use the
/// Box-Muller transform (both variates of a pair are used, cos branch first).
/// Nothing here goes through std::*_distribution, whose algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal.
    double gaussian();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; derives independent child seeds from (seed, stream).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// img + N(0, sigma^2) i.i.d. per pixel, fully determined by spec.seed.
Image add_gaussian_noise(const Image& img, const NoiseSpec& spec);

} // namespace dct2net
