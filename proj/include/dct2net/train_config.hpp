#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace dct2net {

enum class LossKind {
    mse,          // sum of squared pixel errors
    masked,       // squared error on complex pixels only
    ortho_reg,    // mse + beta * |I - P^T P|_1
    patch_target, // squared error of patch reconstructions, before aggregation
    ortho_param,  // mse with P = M (M^T M)^(-1/2), optimized over M
};

std::string to_string(LossKind kind);
/// Accepts the CLI spellings: mse, masked, ortho-reg, patch-target, ortho-param.
LossKind parse_loss_kind(const std::string& name);

struct TrainConfig {
    int epochs = 15;
    int batch = 32;
    int crop = 128;
    double lr_start = 1e-3;
    double lr_end = 1e-5;
    int m = 32;
    double sigma_min = 1.0;
    double sigma_max = 55.0;
    std::uint64_t seed = 0;
    int p = 13;
    LossKind loss = LossKind::mse;
    double beta = 0.0;
    double threshold_scale = 3.0;
    // Crops drawn per training image and epoch; one epoch is
    // ceil(images * crops_per_image / batch) steps.
    int crops_per_image = 665;
    std::optional<int> steps_per_epoch;
    double validation_sigma = 25.0;
    int threads = 0;
    // Zero the wall-clock field of log records so logs are byte-reproducible.
    bool log_timing = true;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

} // namespace dct2net
