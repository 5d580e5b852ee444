#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dct2net/batch.hpp"
#include "dct2net/model.hpp"
#include "dct2net/network.hpp"
#include "dct2net/train_config.hpp"

namespace dct2net {

struct TrainData {
    std::vector<TrainImage> train;
    std::vector<Image> validation;
};

/// Holds out the last max(1, floor(N * fraction)) images for validation. A
/// single image is used for both training and validation.
TrainData split_training_images(std::vector<Image> images, double fraction = 0.05);

/// Masks for the masked loss, computed once per clean image: Canny mask of the
/// adaptive DCT denoising of the image under sigma 25 noise (fixed seed).
void attach_masks(std::vector<TrainImage>& images, int p, int threads = 0);

long steps_per_epoch(const TrainConfig& cfg, std::size_t train_images);

/// lr_start * (lr_end / lr_start)^(step / total_steps), step counted from 0.
double learning_rate(const TrainConfig& cfg, long step, long total_steps);

/// The transform actually used by the network for parameters `params`: the
/// parameters themselves, or M (M^T M)^(-1/2) for the ortho-param loss.
Eigen::MatrixXd basis_from_params(const Eigen::MatrixXd& params, const TrainConfig& cfg);

/// Full objective of cfg.loss on a batch and its gradient w.r.t. `params`.
LossGradient grad_wrt_basis(std::span<const TrainSample> batch, const Eigen::MatrixXd& params,
                            const TrainConfig& cfg, bool with_gradient = true);

struct GradReport {
    Eigen::MatrixXd analytic;
    Eigen::MatrixXd numeric;
    double max_rel_err = 0.0;
    int compared = 0; // entries with |analytic| above the floor
};

/// Central differences of the extended-precision objective against
/// grad_wrt_basis. The relative error of an entry is |a - n| / max(|a|, |n|).
/// For the ortho-reg loss, entries whose perturbation can cross a kink of the
/// l1 term are skipped.
GradReport gradcheck(std::span<const TrainSample> batch, const Eigen::MatrixXd& params,
                     const TrainConfig& cfg, double step = 1e-5, double floor = 1e-6);

/// Mean PSNR of the eval-phase model on validation images under fixed noise.
double validation_psnr(const DenoiserModel& model, std::span<const Image> images, double sigma,
                       std::uint64_t seed, int threads = 0);

struct TrainLogRecord {
    long step = 0;
    int epoch = 0;
    double lr = 0.0;
    std::optional<double> loss;     // objective per pixel of the batch
    std::optional<double> val_psnr; // set at the end of each epoch and at step 0
    double wall_ms = 0.0;
};

nlohmann::json to_json(const TrainLogRecord& record);

struct TrainHooks {
    std::function<void(const TrainLogRecord&)> on_record;
    std::function<void(const DenoiserModel&, int epoch)> on_epoch;
};

struct TrainResult {
    DenoiserModel model;
    std::optional<double> final_val_psnr;
};

/// Adam on the configured objective, starting from the DCT basis (or M = DCT
/// for ortho-param). The returned model is run with hard shrink at eval time.
TrainResult train(const TrainData& data, const TrainConfig& cfg, const TrainHooks& hooks = {});

/// train() with the ortho-param loss; the basis is orthonormal to 1e-8.
TrainResult train_ortho_param(const TrainData& data, TrainConfig cfg, const TrainHooks& hooks = {});

} // namespace dct2net
