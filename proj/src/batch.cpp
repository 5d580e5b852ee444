#include "dct2net/batch.hpp"

#include <stdexcept>

#include "dct2net/noise.hpp"

namespace dct2net {

CropDraw draw_crop(std::span<const TrainImage> dataset, const TrainConfig& cfg,
                   std::uint64_t step_seed, int index) {
    if (dataset.empty()) {
        throw std::invalid_argument("sample_batch: empty dataset");
    }
    Rng rng(mix_seed(step_seed, static_cast<std::uint64_t>(index)));
    CropDraw draw;
    draw.image = static_cast<std::size_t>(rng.below(dataset.size()));
    const Image& img = dataset[draw.image].clean;
    if (img.height() < cfg.crop || img.width() < cfg.crop) {
        throw std::invalid_argument("sample_batch: image smaller than the crop size");
    }
    draw.top = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.height() - cfg.crop + 1)));
    draw.left = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.width() - cfg.crop + 1)));
    draw.augmentation = static_cast<int>(rng.below(8));
    draw.sigma = rng.uniform(cfg.sigma_min, cfg.sigma_max);
    draw.noise_seed = rng.next_u64();
    return draw;
}

std::vector<TrainSample> sample_batch(std::span<const TrainImage> dataset, const TrainConfig& cfg,
                                      std::uint64_t step_seed) {
    for (const auto& item : dataset) {
        if (item.clean.height() < cfg.crop || item.clean.width() < cfg.crop) {
            throw std::invalid_argument("sample_batch: image smaller than the crop size");
        }
    }
    std::vector<TrainSample> batch;
    batch.reserve(static_cast<std::size_t>(cfg.batch));
    for (int b = 0; b < cfg.batch; ++b) {
        const CropDraw draw = draw_crop(dataset, cfg, step_seed, b);
        const TrainImage& source = dataset[draw.image];
        TrainSample sample;
        sample.clean =
            dihedral(crop(source.clean, draw.top, draw.left, cfg.crop, cfg.crop), draw.augmentation);
        sample.noisy = add_gaussian_noise(sample.clean, NoiseSpec{draw.sigma, draw.noise_seed});
        sample.sigma = draw.sigma;
        if (source.mask) {
            const Image bits = crop(source.mask->to_image(), draw.top, draw.left, cfg.crop, cfg.crop);
            sample.mask = BinaryMask::from_image(dihedral(bits, draw.augmentation));
        }
        batch.push_back(std::move(sample));
    }
    return batch;
}

} // namespace dct2net
