#include "dct2net/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "dct2net/adam.hpp"
#include "dct2net/classifier.hpp"
#include "dct2net/denoiser.hpp"
#include "dct2net/losses.hpp"
#include "dct2net/metrics.hpp"
#include "dct2net/noise.hpp"
#include "dct2net/transform.hpp"

namespace dct2net {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

constexpr std::uint64_t kMaskNoiseSeed = 0x6d61736b;  // "mask"
constexpr std::uint64_t kValidationStream = 0x76616c; // "val"

NetworkSettings network_settings(const TrainConfig& cfg) {
    NetworkSettings s;
    s.m = cfg.m;
    s.threshold_scale = cfg.threshold_scale;
    s.patch_target = cfg.loss == LossKind::patch_target;
    s.use_mask = cfg.loss == LossKind::masked;
    return s;
}

LongMatrix orthonormal_param_ld(const LongMatrix& m) {
    const Eigen::SelfAdjointEigenSolver<LongMatrix> eig(m.transpose() * m);
    const auto& vecs = eig.eigenvectors();
    const auto inv_roots = eig.eigenvalues().cwiseSqrt().cwiseInverse();
    return m * (vecs * inv_roots.asDiagonal() * vecs.transpose());
}

long double reference_objective(std::span<const TrainSample> batch, const LongMatrix& params,
                                const TrainConfig& cfg) {
    const LongMatrix basis = cfg.loss == LossKind::ortho_param ? orthonormal_param_ld(params) : params;
    long double total = reference_data_loss(batch, basis, network_settings(cfg));
    if (cfg.loss == LossKind::ortho_reg && cfg.beta > 0.0) {
        const LongMatrix gap = LongMatrix::Identity(basis.cols(), basis.cols()) - basis.transpose() * basis;
        total += static_cast<long double>(cfg.beta) * gap.cwiseAbs().sum();
    }
    return total;
}

// Each step allocates and frees several matrices of ~20 MB. By default glibc
// serves those with fresh mmaps, and the page faults cost as much as the
// elementwise work; keeping them in the heap lets the pages be reused.
void keep_large_buffers_in_heap() {
#if defined(__GLIBC__)
    static const bool done = [] {
        mallopt(M_MMAP_THRESHOLD, 512 << 20);
        mallopt(M_TRIM_THRESHOLD, 1 << 30);
        return true;
    }();
    (void)done;
#endif
}

} // namespace

TrainData split_training_images(std::vector<Image> images, double fraction) {
    if (images.empty()) {
        throw std::invalid_argument("no training images");
    }
    TrainData data;
    if (images.size() == 1) {
        data.validation.push_back(images.front());
        data.train.push_back(TrainImage{std::move(images.front()), std::nullopt});
        return data;
    }
    const auto held = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(static_cast<double>(images.size()) * fraction)));
    const std::size_t kept = images.size() - held;
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (i < kept) {
            data.train.push_back(TrainImage{std::move(images[i]), std::nullopt});
        } else {
            data.validation.push_back(std::move(images[i]));
        }
    }
    return data;
}

void attach_masks(std::vector<TrainImage>& images, int p, int threads) {
    const TransformBasis dct = dct_basis(p);
    for (std::size_t i = 0; i < images.size(); ++i) {
        auto& item = images[i];
        const Image noisy = add_gaussian_noise(item.clean, NoiseSpec{25.0, mix_seed(kMaskNoiseSeed, i)});
        item.mask = canny_mask(dct_denoise(noisy, 25.0, dct, AggregationMode::adaptive, std::nullopt, threads));
    }
}

long steps_per_epoch(const TrainConfig& cfg, std::size_t train_images) {
    if (cfg.steps_per_epoch) {
        return *cfg.steps_per_epoch;
    }
    const long crops = static_cast<long>(train_images) * cfg.crops_per_image;
    return std::max(1L, (crops + cfg.batch - 1) / cfg.batch);
}

double learning_rate(const TrainConfig& cfg, long step, long total_steps) {
    if (total_steps <= 0) {
        return cfg.lr_start;
    }
    const double frac = static_cast<double>(step) / static_cast<double>(total_steps);
    return cfg.lr_start * std::pow(cfg.lr_end / cfg.lr_start, frac);
}

Eigen::MatrixXd basis_from_params(const Eigen::MatrixXd& params, const TrainConfig& cfg) {
    return cfg.loss == LossKind::ortho_param ? orthonormal_param(params) : params;
}

LossGradient grad_wrt_basis(std::span<const TrainSample> batch, const Eigen::MatrixXd& params,
                            const TrainConfig& cfg, bool with_gradient) {
    const Eigen::MatrixXd basis = basis_from_params(params, cfg);
    if (Eigen::FullPivLU<Eigen::MatrixXd>(basis).rcond() < 1e-12) {
        throw std::invalid_argument("grad_wrt_basis: singular transform");
    }
    LossGradient out =
        batch_data_loss_and_gradient(batch, basis, network_settings(cfg), with_gradient, cfg.threads);
    if (cfg.loss == LossKind::ortho_reg) {
        out.loss += loss_ortho_penalty(basis, cfg.beta);
        if (with_gradient) {
            out.grad += ortho_penalty_gradient(basis, cfg.beta);
        }
    }
    if (with_gradient && cfg.loss == LossKind::ortho_param) {
        out.grad = orthonormal_param_backward(params, out.grad);
    }
    return out;
}

GradReport gradcheck(std::span<const TrainSample> batch, const Eigen::MatrixXd& params,
                     const TrainConfig& cfg, double step, double floor) {
    GradReport report;
    report.analytic = grad_wrt_basis(batch, params, cfg).grad;
    report.numeric = Eigen::MatrixXd::Zero(params.rows(), params.cols());

    Eigen::MatrixXd gap;
    if (cfg.loss == LossKind::ortho_reg) {
        gap = (Eigen::MatrixXd::Identity(params.cols(), params.cols()) - params.transpose() * params)
                  .cwiseAbs();
    }
    const LongMatrix base = params.cast<long double>();
    const long double h = step;
    for (Eigen::Index r = 0; r < params.rows(); ++r) {
        for (Eigen::Index c = 0; c < params.cols(); ++c) {
            LongMatrix plus = base;
            LongMatrix minus = base;
            plus(r, c) += h;
            minus(r, c) -= h;
            const long double diff =
                reference_objective(batch, plus, cfg) - reference_objective(batch, minus, cfg);
            report.numeric(r, c) = static_cast<double>(diff / (2.0L * h));

            const double a = report.analytic(r, c);
            if (std::abs(a) <= floor) {
                continue;
            }
            // perturbing column c moves row and column c of I - P^T P
            if (cfg.loss == LossKind::ortho_reg && gap.col(c).minCoeff() < 1e-4) {
                continue;
            }
            const double n = report.numeric(r, c);
            const double rel = std::abs(a - n) / std::max(std::abs(a), std::abs(n));
            report.max_rel_err = std::max(report.max_rel_err, rel);
            ++report.compared;
        }
    }
    return report;
}

double validation_psnr(const DenoiserModel& model, std::span<const Image> images, double sigma,
                       std::uint64_t seed, int threads) {
    if (images.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const Image noisy = add_gaussian_noise(images[i], NoiseSpec{sigma, mix_seed(seed, i)});
        sum += psnr(dct2net_forward(noisy, sigma, model, Phase::eval, threads), images[i]);
    }
    return sum / static_cast<double>(images.size());
}

nlohmann::json to_json(const TrainLogRecord& record) {
    nlohmann::json j;
    j["step"] = record.step;
    j["epoch"] = record.epoch;
    j["lr"] = record.lr;
    j["loss"] = record.loss ? nlohmann::json(*record.loss) : nlohmann::json(nullptr);
    j["val_psnr"] = record.val_psnr ? nlohmann::json(*record.val_psnr) : nlohmann::json(nullptr);
    j["wall_ms"] = record.wall_ms;
    return j;
}

TrainResult train(const TrainData& data, const TrainConfig& cfg, const TrainHooks& hooks) {
    cfg.validate();
    if (data.train.empty()) {
        throw std::invalid_argument("train: empty dataset");
    }
    std::vector<TrainImage> images = data.train;
    if (cfg.loss == LossKind::masked &&
        std::any_of(images.begin(), images.end(), [](const TrainImage& t) { return !t.mask; })) {
        attach_masks(images, cfg.p, cfg.threads);
    }

    keep_large_buffers_in_heap();
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        if (!cfg.log_timing) {
            return 0.0;
        }
        const std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
        return d.count();
    };
    const std::uint64_t val_seed = mix_seed(cfg.seed, kValidationStream);
    auto make_model = [&](const Eigen::MatrixXd& params) {
        Eigen::MatrixXd basis = basis_from_params(params, cfg);
        nlohmann::json meta = {
            {"loss", to_string(cfg.loss)},
            {"epochs", cfg.epochs},
            {"batch", cfg.batch},
            {"crop", cfg.crop},
            {"lr", {cfg.lr_start, cfg.lr_end}},
            {"sigma_range", {cfg.sigma_min, cfg.sigma_max}},
            {"seed", cfg.seed},
            {"train_images", images.size()},
            {"validation_images", data.validation.size()},
        };
        if (cfg.loss == LossKind::ortho_reg) {
            meta["beta"] = cfg.beta;
        }
        if (cfg.loss == LossKind::masked) {
            meta["mask_source"] = "canny of adaptive DCT at sigma 25, once per clean image";
        }
        return DenoiserModel(TransformBasis(std::move(basis)), cfg.m, cfg.threshold_scale, std::move(meta));
    };

    Eigen::MatrixXd params = dct_basis(cfg.p).matrix();
    OptimizerState state(params.rows(), params.cols());
    const long per_epoch = steps_per_epoch(cfg, images.size());
    const long total = per_epoch * cfg.epochs;
    const double normalizer = static_cast<double>(cfg.batch) * cfg.crop * cfg.crop *
                              (cfg.loss == LossKind::patch_target ? cfg.p * cfg.p : 1);

    std::optional<double> val;
    if (!data.validation.empty()) {
        val = validation_psnr(make_model(params), data.validation, cfg.validation_sigma, val_seed,
                              cfg.threads);
    }
    if (hooks.on_record && cfg.epochs > 0) {
        hooks.on_record(TrainLogRecord{0, 0, learning_rate(cfg, 0, total), std::nullopt, val, elapsed_ms()});
    }

    long step = 0;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (long k = 0; k < per_epoch; ++k, ++step) {
            const double lr = learning_rate(cfg, step, total);
            const auto batch = sample_batch(images, cfg, mix_seed(cfg.seed, static_cast<std::uint64_t>(step)));
            const LossGradient lg = grad_wrt_basis(batch, params, cfg);
            adam_step(params, lg.grad, state, lr);
            const bool epoch_end = k + 1 == per_epoch;
            std::optional<double> epoch_val;
            if (epoch_end && !data.validation.empty()) {
                val = validation_psnr(make_model(params), data.validation, cfg.validation_sigma,
                                      val_seed, cfg.threads);
                epoch_val = val;
            }
            if (hooks.on_record) {
                hooks.on_record(
                    TrainLogRecord{step + 1, epoch, lr, lg.loss / normalizer, epoch_val, elapsed_ms()});
            }
        }
        if (hooks.on_epoch) {
            hooks.on_epoch(make_model(params), epoch);
        }
    }
    return TrainResult{make_model(params), val};
}

TrainResult train_ortho_param(const TrainData& data, TrainConfig cfg, const TrainHooks& hooks) {
    cfg.loss = LossKind::ortho_param;
    return train(data, cfg, hooks);
}

} // namespace dct2net
