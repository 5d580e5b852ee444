#include "dct2net/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dct2net/classifier.hpp"
#include "dct2net/denoiser.hpp"
#include "dct2net/error.hpp"
#include "dct2net/hybrid.hpp"
#include "dct2net/image_io.hpp"
#include "dct2net/metrics.hpp"
#include "dct2net/model.hpp"
#include "dct2net/noise.hpp"
#include "dct2net/trainer.hpp"
#include "dct2net/transform.hpp"

namespace dct2net {

namespace {

const char* const kMethods[] = {"dct-uniform", "dct-adaptive", "dct2net", "hybrid"};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits = 2) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

nlohmann::json psnr_json(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

std::string dilation_label(int size) {
    return size == kAllComplex ? "inf" : std::to_string(size);
}

std::vector<double> parse_doubles(const std::string& list) {
    std::vector<double> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("empty list");
    }
    return out;
}

std::vector<int> parse_sizes(const std::string& list) {
    std::vector<int> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "inf" || item == "∞") {
            out.push_back(kAllComplex);
            continue;
        }
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size() || v < 1 || v % 2 == 0) {
                throw std::invalid_argument(item);
            }
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("dilation sizes must be odd positive integers or inf, got '" + item + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("empty size list");
    }
    return out;
}

std::vector<std::string> split_methods(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (std::find(std::begin(kMethods), std::end(kMethods), item) == std::end(kMethods)) {
            throw UsageError("unknown method '" + item + "'");
        }
        out.push_back(item);
    }
    return out;
}

bool needs_model(const std::string& method) {
    return method == "dct2net" || method == "hybrid";
}

struct NamedImage {
    std::string name;
    Image image;
};

std::vector<NamedImage> load_dir(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw UsageError("not a directory: " + dir);
    }
    std::vector<NamedImage> out;
    for (const auto& path : list_images(dir)) {
        out.push_back(NamedImage{path.filename().string(), read_image(path)});
    }
    if (out.empty()) {
        throw UsageError("no .pgm or .png images in " + dir);
    }
    return out;
}

/// One denoiser selected by name, with its basis or model bound.
class Method {
public:
    Method(std::string name, int p, std::optional<DenoiserModel> model, int threads)
        : name_(std::move(name)), dct_(dct_basis(model ? model->p() : p)), model_(std::move(model)),
          threads_(threads) {}

    Image run(const Image& noisy, double sigma) const {
        if (name_ == "dct-uniform") {
            return dct_denoise(noisy, sigma, dct_, AggregationMode::uniform, std::nullopt, threads_);
        }
        if (name_ == "dct-adaptive") {
            return dct_denoise(noisy, sigma, dct_, AggregationMode::adaptive, std::nullopt, threads_);
        }
        if (name_ == "dct2net") {
            return dct2net_forward(noisy, sigma, *model_, Phase::eval, threads_);
        }
        HybridConfig cfg(*model_);
        cfg.threads = threads_;
        return hybrid_denoise(noisy, sigma, cfg).image;
    }

private:
    std::string name_;
    TransformBasis dct_;
    std::optional<DenoiserModel> model_;
    int threads_;
};

std::uint64_t eval_noise_seed(std::uint64_t base, std::size_t image, double sigma) {
    return mix_seed(mix_seed(base, image), std::bit_cast<std::uint64_t>(sigma));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text)) {
        throw IoError("cannot write " + path);
    }
}

// ---- subcommands -----------------------------------------------------------

struct DenoiseArgs {
    std::string in, out, method = "dct-adaptive", model, ref;
    double sigma = -1.0;
    int p = 13;
    std::optional<std::uint64_t> seed_noise;
    int threads = 0;
};

int cmd_denoise(const DenoiseArgs& a) {
    split_methods(a.method);
    if (needs_model(a.method) && a.model.empty()) {
        throw UsageError("--method " + a.method + " requires --model");
    }
    std::optional<DenoiserModel> model;
    if (!a.model.empty()) {
        model = load_model(a.model);
    }
    const Image clean = read_image(a.in);
    Image noisy = clean;
    if (a.seed_noise) {
        noisy = add_gaussian_noise(clean, NoiseSpec{a.sigma, *a.seed_noise});
        std::cout << "noisy PSNR: " << fixed(psnr(noisy, clean)) << " dB\n";
    }
    const Method method(a.method, a.p, std::move(model), a.threads);
    const Image out = method.run(noisy, a.sigma);
    write_image(out, a.out);
    if (!a.ref.empty()) {
        std::cout << "PSNR: " << fixed(psnr(out, read_image(a.ref))) << " dB\n";
    }
    return kExitOk;
}

struct TrainArgs {
    std::string data, out, log, loss = "mse";
    TrainConfig cfg;
    int steps_per_epoch = 0;
    bool no_timing = false;
    bool checkpoints = false;
};

int cmd_train(TrainArgs a) {
    const auto named = load_dir(a.data);
    try {
        a.cfg.loss = parse_loss_kind(a.loss);
        if (a.steps_per_epoch > 0) {
            a.cfg.steps_per_epoch = a.steps_per_epoch;
        }
        a.cfg.log_timing = !a.no_timing;
        a.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<Image> images;
    nlohmann::json names = nlohmann::json::array();
    for (const auto& n : named) {
        images.push_back(n.image);
        names.push_back(n.name);
    }
    const TrainData data = split_training_images(std::move(images));

    const std::string log_path = a.log.empty() ? a.out + ".log.jsonl" : a.log;
    std::ofstream log(log_path, std::ios::trunc);
    if (!log) {
        throw IoError("cannot write " + log_path);
    }
    TrainHooks hooks;
    hooks.on_record = [&](const TrainLogRecord& r) {
        log << to_json(r).dump() << '\n';
        log.flush();
        if (r.val_psnr) {
            std::cerr << "epoch " << r.epoch << " step " << r.step << " val PSNR "
                      << fixed(*r.val_psnr, 3) << " dB\n";
        }
    };
    if (a.checkpoints) {
        hooks.on_epoch = [&](const DenoiserModel& m, int) { save_model(m, a.out + ".partial"); };
    }
    TrainResult result = train(data, a.cfg, hooks);
    const std::size_t held = data.validation.size();
    result.model.meta()["train_files"] =
        nlohmann::json(std::vector<std::string>(names.begin(), names.end() - static_cast<long>(held)));
    result.model.meta()["validation_files"] =
        nlohmann::json(std::vector<std::string>(names.end() - static_cast<long>(held), names.end()));
    if (named.size() == 1) {
        result.model.meta()["train_files"] = names;
    }
    save_model(result.model, a.out);
    if (result.final_val_psnr) {
        std::cout << "final validation PSNR: " << fixed(*result.final_val_psnr, 3) << " dB\n";
    }
    return kExitOk;
}

struct EvalArgs {
    std::string data, methods = "dct-adaptive", model, json_out, sigmas = "15,25,50";
    int p = 13;
    std::uint64_t noise_seed = 0;
    int threads = 0;
    bool no_timing = false;
};

int cmd_eval(const EvalArgs& a) {
    const auto methods = split_methods(a.methods);
    const auto sigmas = parse_doubles(a.sigmas);
    const bool want_model = std::any_of(methods.begin(), methods.end(), needs_model);
    if (want_model && a.model.empty()) {
        throw UsageError("methods dct2net and hybrid require --model");
    }
    std::optional<DenoiserModel> model;
    if (!a.model.empty()) {
        model = load_model(a.model);
    }
    const auto images = load_dir(a.data);

    EvalReport report;
    report.config = {{"data", a.data},   {"methods", methods},       {"sigmas", sigmas},
                     {"p", model ? model->p() : a.p}, {"noise_seed", a.noise_seed},
                     {"model", a.model}, {"psnr_peak", 255},          {"clamped", false}};
    for (const auto& name : methods) {
        const Method method(name, a.p, model, a.threads);
        for (const double sigma : sigmas) {
            for (std::size_t i = 0; i < images.size(); ++i) {
                const Image noisy = add_gaussian_noise(
                    images[i].image, NoiseSpec{sigma, eval_noise_seed(a.noise_seed, i, sigma)});
                const auto t0 = std::chrono::steady_clock::now();
                const Image out = method.run(noisy, sigma);
                const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
                report.rows.push_back(EvalRow{images[i].name, name, sigma, psnr(out, images[i].image),
                                              a.no_timing ? 0.0 : dt.count()});
            }
        }
    }
    compute_averages(report);
    std::cout << format_table(report);
    if (!a.json_out.empty()) {
        write_text(a.json_out, to_json(report).dump(2) + "\n");
    }
    return kExitOk;
}

struct RenderArgs {
    std::string model, out;
    bool dct = false;
    int p = 13;
};

Image render_basis(const Eigen::MatrixXd& basis, int p) {
    const int side = p * p + p + 1;
    Image canvas(side, side);
    for (int u = 0; u < p; ++u) {
        for (int v = 0; v < p; ++v) {
            const auto atom = basis.col(u * p + v);
            const double lo = atom.minCoeff();
            const double hi = atom.maxCoeff();
            const int top = 1 + u * (p + 1);
            const int left = 1 + v * (p + 1);
            for (int x = 0; x < p; ++x) {
                for (int y = 0; y < p; ++y) {
                    const double value = atom[x * p + y];
                    canvas(top + x, left + y) = hi > lo ? 255.0 * (value - lo) / (hi - lo) : 128.0;
                }
            }
        }
    }
    return canvas;
}

int cmd_basis_render(const RenderArgs& a) {
    if (a.dct == !a.model.empty()) {
        throw UsageError("give exactly one of --model or --dct");
    }
    if (a.dct) {
        write_image(render_basis(dct_basis(a.p).matrix(), a.p), a.out);
    } else {
        const DenoiserModel model = load_model(a.model);
        write_image(render_basis(model.basis().matrix(), model.p()), a.out);
    }
    return kExitOk;
}

struct MaskArgs {
    std::string in, out, kind = "canny";
    double sigma = 0.0;
    int p = 13;
    CannyParams canny;
    int window = 7;
    double percentile = 0.75;
    int threads = 0;
};

int cmd_mask(const MaskArgs& a) {
    if (a.kind != "canny" && a.kind != "tv") {
        throw UsageError("--kind must be canny or tv");
    }
    Image source = read_image(a.in);
    if (a.sigma > 0.0) {
        source = dct_denoise(source, a.sigma, dct_basis(a.p), AggregationMode::adaptive, std::nullopt,
                             a.threads);
    }
    const BinaryMask mask =
        a.kind == "canny" ? canny_mask(source, a.canny) : tv_mask(source, a.window, a.percentile);
    write_image(mask.to_image(255.0), a.out);
    std::cout << "complex pixels: " << mask.count() << " of "
              << static_cast<std::size_t>(mask.height()) * mask.width() << "\n";
    return kExitOk;
}

struct GradcheckArgs {
    std::string image = std::string(DCT2NET_DATA_DIR) + "/fixtures/gradcheck12.pgm";
    std::string loss = "mse";
    TrainConfig cfg;
    double sigma = 25.0;
    double perturb = 0.05;
    double step = 1e-5;
    double tol = 0.0;
    std::uint64_t seed = 1;
};

int cmd_gradcheck(GradcheckArgs a) {
    try {
        a.cfg.loss = parse_loss_kind(a.loss);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.cfg.p < 3 || a.cfg.p % 2 == 0 || a.cfg.p > 5) {
        throw UsageError("gradcheck needs p in {3, 5}");
    }
    const Image clean = read_image(a.image);
    Rng rng(a.seed);
    Eigen::MatrixXd params = dct_basis(a.cfg.p).matrix();
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        params.data()[i] += a.perturb * rng.uniform(-1.0, 1.0);
    }
    TrainSample sample{add_gaussian_noise(clean, NoiseSpec{a.sigma, rng.next_u64()}), clean, a.sigma,
                       std::nullopt};
    if (a.cfg.loss == LossKind::masked) {
        std::vector<TrainImage> one{TrainImage{clean, std::nullopt}};
        attach_masks(one, a.cfg.p);
        sample.mask = one.front().mask;
    }
    const std::vector<TrainSample> batch{sample};
    const GradReport report = gradcheck(batch, params, a.cfg, a.step);
    const double tol = a.tol > 0.0 ? a.tol : (a.cfg.loss == LossKind::ortho_param ? 1e-3 : 1e-4);
    std::cout << "max_rel_err " << std::scientific << std::setprecision(3) << report.max_rel_err
              << " over " << report.compared << " entries (tolerance " << tol << ")\n";
    return report.max_rel_err < tol && report.compared > 0 ? kExitOk : kExitCheckFailed;
}

struct SweepArgs {
    std::string data, in, model, sizes = "3,5,7,9,11,inf";
    double sigma = 20.0;
    std::uint64_t noise_seed = 0;
    int threads = 0;
};

int cmd_dilation_sweep(const SweepArgs& a) {
    if (a.data.empty() == a.in.empty()) {
        throw UsageError("give exactly one of --data or --in");
    }
    const auto sizes = parse_sizes(a.sizes);
    std::vector<NamedImage> images;
    if (!a.in.empty()) {
        images.push_back(NamedImage{std::filesystem::path(a.in).filename().string(), read_image(a.in)});
    } else {
        images = load_dir(a.data);
    }
    HybridConfig cfg(load_model(a.model));
    cfg.threads = a.threads;

    std::vector<std::vector<SweepRow>> per_image;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const Image noisy = add_gaussian_noise(
            images[i].image, NoiseSpec{a.sigma, eval_noise_seed(a.noise_seed, i, a.sigma)});
        per_image.push_back(dilation_sweep(noisy, images[i].image, a.sigma, cfg, sizes));
    }
    std::cout << std::left << std::setw(10) << "dilation";
    for (const auto& img : images) {
        std::cout << std::right << std::setw(14) << img.name.substr(0, 13);
    }
    std::cout << std::setw(10) << "average" << "\n";
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        double sum = 0.0;
        std::cout << std::left << std::setw(10) << dilation_label(sizes[s]) << std::right;
        for (const auto& rows : per_image) {
            sum += rows[s].psnr;
            std::cout << std::setw(14) << fixed(rows[s].psnr);
        }
        std::cout << std::setw(10) << fixed(sum / static_cast<double>(per_image.size()), 3) << "\n";
    }
    return kExitOk;
}

} // namespace

void compute_averages(EvalReport& report) {
    std::map<std::pair<std::string, double>, std::pair<double, int>> acc;
    std::vector<std::pair<std::string, double>> order;
    for (const auto& row : report.rows) {
        const auto key = std::make_pair(row.method, row.sigma);
        auto [it, inserted] = acc.try_emplace(key, 0.0, 0);
        if (inserted) {
            order.push_back(key);
        }
        it->second.first += row.psnr;
        it->second.second += 1;
    }
    report.averages.clear();
    for (const auto& key : order) {
        const auto& [sum, count] = acc.at(key);
        report.averages.push_back(EvalAverage{key.first, key.second, sum / count});
    }
}

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"image", r.image}, {"method", r.method}, {"sigma", r.sigma},
                        {"psnr", psnr_json(r.psnr)}, {"ms", r.ms}});
    }
    nlohmann::json averages = nlohmann::json::array();
    for (const auto& a : report.averages) {
        averages.push_back({{"method", a.method}, {"sigma", a.sigma}, {"psnr", psnr_json(a.psnr)}});
    }
    return {{"config", report.config}, {"rows", rows}, {"averages", averages}};
}

std::string format_table(const EvalReport& report) {
    std::vector<std::pair<std::string, double>> columns;
    std::vector<std::string> images;
    std::map<std::tuple<std::string, std::string, double>, double> cell;
    for (const auto& r : report.rows) {
        const auto col = std::make_pair(r.method, r.sigma);
        if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
            columns.push_back(col);
        }
        if (std::find(images.begin(), images.end(), r.image) == images.end()) {
            images.push_back(r.image);
        }
        cell[{r.image, r.method, r.sigma}] = r.psnr;
    }
    std::size_t name_width = 8;
    for (const auto& name : images) {
        name_width = std::max(name_width, name.size() + 2);
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width)) << "image" << std::right;
    for (const auto& [method, sigma] : columns) {
        out << std::setw(20) << (method + " s=" + fixed(sigma, 0));
    }
    out << "\n";
    for (const auto& name : images) {
        out << std::left << std::setw(static_cast<int>(name_width)) << name << std::right;
        for (const auto& [method, sigma] : columns) {
            const auto it = cell.find({name, method, sigma});
            out << std::setw(20) << (it == cell.end() ? "-" : fixed(it->second));
        }
        out << "\n";
    }
    out << std::left << std::setw(static_cast<int>(name_width)) << "Average" << std::right;
    for (const auto& [method, sigma] : columns) {
        double value = 0.0;
        for (const auto& avg : report.averages) {
            if (avg.method == method && avg.sigma == sigma) {
                value = avg.psnr;
            }
        }
        out << std::setw(20) << fixed(value);
    }
    out << "\n";
    return out.str();
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Transform-domain image denoising: DCT, learned DCT2net and the hybrid compositor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dct2net 0.1.0");

    DenoiseArgs den;
    auto* denoise = app.add_subcommand("denoise", "Denoise one image");
    denoise->add_option("--in", den.in, "Input image (PGM or PNG)")->required();
    denoise->add_option("--out", den.out, "Output image; .png writes PNG, anything else P5")->required();
    denoise->add_option("--sigma", den.sigma, "Noise standard deviation (0-255 scale)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    denoise->add_option("--method", den.method, "dct-uniform, dct-adaptive, dct2net or hybrid");
    denoise->add_option("--model", den.model, "Model file for dct2net and hybrid");
    denoise->add_option("--p", den.p, "Patch side for the DCT methods");
    denoise->add_option("--seed-noise", den.seed_noise, "Add Gaussian noise of --sigma with this seed first");
    denoise->add_option("--ref", den.ref, "Clean reference; prints PSNR");
    denoise->add_option("--threads", den.threads, "Worker threads (default: DCT2NET_THREADS or all cores)");

    TrainArgs tr;
    auto* trainc = app.add_subcommand("train", "Learn a transform from a directory of clean images");
    trainc->add_option("--data", tr.data, "Directory of clean training images")->required();
    trainc->add_option("--out", tr.out, "Model file to write")->required();
    trainc->add_option("--log", tr.log, "JSON-lines log (default <out>.log.jsonl)");
    trainc->add_option("--p", tr.cfg.p, "Patch side");
    trainc->add_option("--epochs", tr.cfg.epochs, "Epochs");
    trainc->add_option("--batch", tr.cfg.batch, "Crops per step");
    trainc->add_option("--crop", tr.cfg.crop, "Crop side");
    trainc->add_option("--m", tr.cfg.m, "Smooth-shrink order");
    trainc->add_option("--sigma-min", tr.cfg.sigma_min, "Smallest training sigma");
    trainc->add_option("--sigma-max", tr.cfg.sigma_max, "Largest training sigma");
    trainc->add_option("--lr-start", tr.cfg.lr_start, "Initial learning rate");
    trainc->add_option("--lr-end", tr.cfg.lr_end, "Final learning rate");
    trainc->add_option("--loss", tr.loss, "mse, masked, ortho-reg, patch-target or ortho-param");
    trainc->add_option("--beta", tr.cfg.beta, "Weight of the orthogonality penalty (ortho-reg)");
    trainc->add_option("--threshold-scale", tr.cfg.threshold_scale, "c in lambda = c sigma");
    trainc->add_option("--seed", tr.cfg.seed, "Seed for crops, augmentation and noise");
    trainc->add_option("--crops-per-image", tr.cfg.crops_per_image, "Crops per image and epoch");
    trainc->add_option("--steps-per-epoch", tr.steps_per_epoch, "Override the steps per epoch");
    trainc->add_option("--threads", tr.cfg.threads, "Worker threads");
    trainc->add_flag("--no-timing", tr.no_timing, "Write 0 for wall_ms so logs are reproducible");
    trainc->add_flag("--checkpoint", tr.checkpoints, "Save <out>.partial after every epoch");

    EvalArgs ev;
    auto* evalc = app.add_subcommand("eval", "PSNR table over a directory of clean images");
    evalc->add_option("--data", ev.data, "Directory of clean images")->required();
    evalc->add_option("--sigmas", ev.sigmas, "Comma-separated noise levels");
    evalc->add_option("--method", ev.methods, "Comma-separated methods");
    evalc->add_option("--model", ev.model, "Model file for dct2net and hybrid");
    evalc->add_option("--p", ev.p, "Patch side for the DCT methods without a model");
    evalc->add_option("--noise-seed", ev.noise_seed, "Seed of the evaluation noise");
    evalc->add_option("--json", ev.json_out, "Write the report as JSON");
    evalc->add_option("--threads", ev.threads, "Worker threads");
    evalc->add_flag("--no-timing", ev.no_timing, "Report 0 ms so reports are reproducible");

    RenderArgs rd;
    auto* render = app.add_subcommand("basis-render", "Draw the atoms of a transform as a tile grid");
    render->add_option("--model", rd.model, "Model file");
    render->add_flag("--dct", rd.dct, "Draw the DCT basis instead");
    render->add_option("--p", rd.p, "Patch side for --dct");
    render->add_option("--out", rd.out, "Output image")->required();

    MaskArgs mk;
    auto* maskc = app.add_subcommand("mask", "Export a flat/complex classification");
    maskc->add_option("--in", mk.in, "Input image")->required();
    maskc->add_option("--out", mk.out, "Mask image (0 flat, 255 complex)")->required();
    maskc->add_option("--kind", mk.kind, "canny or tv");
    maskc->add_option("--sigma", mk.sigma, "Run the DCT denoiser at this sigma before classifying");
    maskc->add_option("--p", mk.p, "Patch side of that DCT pass");
    maskc->add_option("--dilation", mk.canny.dilation, "Dilation kernel side");
    maskc->add_option("--low", mk.canny.low, "Canny low threshold on [0,1]");
    maskc->add_option("--high", mk.canny.high, "Canny high threshold on [0,1]");
    maskc->add_option("--gauss-sigma", mk.canny.gauss_sigma, "Canny pre-blur");
    maskc->add_option("--window", mk.window, "TV window side");
    maskc->add_option("--percentile", mk.percentile, "TV threshold percentile");
    maskc->add_option("--threads", mk.threads, "Worker threads");

    GradcheckArgs gc;
    gc.cfg.p = 3;
    auto* gradc = app.add_subcommand("gradcheck", "Compare the analytic gradient with finite differences");
    gradc->add_option("--image", gc.image, "Small clean image (default: bundled 12x12 fixture)");
    gradc->add_option("--p", gc.cfg.p, "Patch side (3 or 5)");
    gradc->add_option("--sigma", gc.sigma, "Noise level");
    gradc->add_option("--m", gc.cfg.m, "Smooth-shrink order");
    gradc->add_option("--loss", gc.loss, "Loss variant");
    gradc->add_option("--beta", gc.cfg.beta, "Penalty weight for ortho-reg");
    gradc->add_option("--seed", gc.seed, "Seed for the basis perturbation and noise");
    gradc->add_option("--perturb", gc.perturb, "Amplitude of the random perturbation of the DCT basis");
    gradc->add_option("--step", gc.step, "Finite-difference step");
    gradc->add_option("--tol", gc.tol, "Pass threshold (default 1e-4, 1e-3 for ortho-param)");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("dilation-sweep", "Hybrid PSNR for several dilation sizes");
    sweep->add_option("--data", sw.data, "Directory of clean images");
    sweep->add_option("--in", sw.in, "Single clean image");
    sweep->add_option("--model", sw.model, "Model file")->required();
    sweep->add_option("--sigma", sw.sigma, "Noise level");
    sweep->add_option("--sizes", sw.sizes, "Comma-separated odd sizes; inf for an all-ones mask");
    sweep->add_option("--noise-seed", sw.noise_seed, "Seed of the noise");
    sweep->add_option("--threads", sw.threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*denoise) {
            return cmd_denoise(den);
        }
        if (*trainc) {
            return cmd_train(tr);
        }
        if (*evalc) {
            return cmd_eval(ev);
        }
        if (*render) {
            return cmd_basis_render(rd);
        }
        if (*maskc) {
            mk.canny.validate();
            return cmd_mask(mk);
        }
        if (*gradc) {
            return cmd_gradcheck(gc);
        }
        if (*sweep) {
            return cmd_dilation_sweep(sw);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitModel;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}

} // namespace dct2net
