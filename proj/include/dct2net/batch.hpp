#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dct2net/image.hpp"
#include "dct2net/mask.hpp"
#include "dct2net/network.hpp"
#include "dct2net/train_config.hpp"

namespace dct2net {

/// A clean training image and, for the masked loss, its precomputed mask.
struct TrainImage {
    Image clean;
    std::optional<BinaryMask> mask;
};

/// What sample_batch drew for one element, for inspection and tests.
struct CropDraw {
    std::size_t image = 0;
    int top = 0;
    int left = 0;
    int augmentation = 0; // dihedral id, 0 = unchanged
    double sigma = 0.0;
    std::uint64_t noise_seed = 0;
};

/// Draw for element `index` of the batch seeded by step_seed.
CropDraw draw_crop(std::span<const TrainImage> dataset, const TrainConfig& cfg,
                   std::uint64_t step_seed, int index);

/// cfg.batch elements: random crop, one of 8 dihedral transforms, sigma uniform
/// on [sigma_min, sigma_max), AWGN. Fully determined by step_seed. Throws
/// std::invalid_argument if any image is smaller than the crop.
std::vector<TrainSample> sample_batch(std::span<const TrainImage> dataset, const TrainConfig& cfg,
                                      std::uint64_t step_seed);

} // namespace dct2net
