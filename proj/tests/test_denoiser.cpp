#include <doctest.h>

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "dct2net/denoiser.hpp"
#include "dct2net/error.hpp"
#include "dct2net/image_io.hpp"
#include "dct2net/metrics.hpp"
#include "dct2net/model.hpp"
#include "dct2net/noise.hpp"
#include "dct2net/transform.hpp"
#include "helpers.hpp"

using namespace dct2net;

namespace {

DenoiserModel dct_model(int p) { return DenoiserModel(dct_basis(p), 32); }

DenoiserModel random_model(int p, std::uint64_t seed) {
    const int n = p * p;
    return DenoiserModel(
        TransformBasis(Eigen::MatrixXd::Identity(n, n) + 0.2 * testing::random_matrix(n, n, seed)),
        32);
}

std::vector<std::uint8_t> model_bytes(const nlohmann::json& header, std::size_t doubles) {
    const std::string text = header.dump();
    std::vector<std::uint8_t> out{'D', 'C', 'T', '2', 'N', 'E', 'T', '1'};
    std::uint64_t len = text.size();
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    }
    out.insert(out.end(), text.begin(), text.end());
    out.resize(out.size() + doubles * 8, 0);
    return out;
}

} // namespace

TEST_SUITE("denoiser") {

TEST_CASE("adaptive weight counts non-zero coefficients") {
    CHECK(adaptive_weight(Eigen::VectorXd::Zero(169)) == 1.0);
    CHECK(adaptive_weight(Eigen::VectorXd::Ones(169)) == doctest::Approx(1.0 / 170.0));
    Eigen::VectorXd one = Eigen::VectorXd::Zero(9);
    one(4) = -2.0;
    CHECK(adaptive_weight(one) == 0.5);
}

TEST_CASE("network forward equals the patch-wise DCT denoiser") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        const Image img = testing::random_image(40, 33, s);
        for (int p : {3, 7}) {
            const DenoiserModel model = dct_model(p);
            for (double sigma : {5.0, 25.0, 50.0}) {
                const Image a = dct2net_forward(img, sigma, model, Phase::eval, 1);
                const Image b = dct_denoise(img, sigma, model.basis(), AggregationMode::adaptive,
                                            std::nullopt, 1);
                CHECK(testing::max_abs_diff(a, b) < 1e-8);
            }
        }
    }
}

TEST_CASE("zero noise level is the identity for any invertible basis") {
    const Image img = testing::random_image(21, 18, 9);
    for (int p : {3, 5}) {
        const DenoiserModel model = random_model(p, 77 + p);
        CHECK(testing::max_abs_diff(dct2net_forward(img, 0.0, model, Phase::eval), img) < 1e-8);
        CHECK(testing::max_abs_diff(dct2net_forward(img, 0.0, model, Phase::train), img) < 1e-8);
        for (auto mode : {AggregationMode::uniform, AggregationMode::adaptive}) {
            CHECK(testing::max_abs_diff(dct_denoise(img, 0.0, model.basis(), mode), img) < 1e-8);
        }
    }
}

TEST_CASE("constant image stays constant") {
    const Image img(24, 24, 100.0);
    const Image out = dct_denoise(img, 25.0, dct_basis(5), AggregationMode::adaptive);
    CHECK(testing::max_abs_diff(out, img) < 1e-9);
}

TEST_CASE("negative sigma is rejected") {
    const Image img(8, 8, 1.0);
    CHECK_THROWS_AS(dct_denoise(img, -1.0, dct_basis(3), AggregationMode::uniform),
                    std::invalid_argument);
    CHECK_THROWS_AS(dct2net_forward(img, -1.0, dct_model(3), Phase::eval), std::invalid_argument);
}

TEST_CASE("transposing the input transposes the output with the DCT basis") {
    const Image img = add_gaussian_noise(testing::smooth_image(30, 30, 4), {25.0, 1});
    for (auto mode : {AggregationMode::uniform, AggregationMode::adaptive}) {
        const Image a = transpose(dct_denoise(img, 25.0, dct_basis(5), mode));
        const Image b = dct_denoise(transpose(img), 25.0, dct_basis(5), mode);
        CHECK(testing::max_abs_diff(a, b) < 1e-9);
    }
}

TEST_CASE("without shrinkage the pipeline follows a brightness offset") {
    const Image img = testing::random_image(16, 16, 3);
    Image shifted = img;
    for (auto& v : shifted.pixels()) {
        v += 17.25;
    }
    const TransformBasis basis = random_model(3, 5).basis();
    for (auto mode : {AggregationMode::uniform, AggregationMode::adaptive}) {
        Image expected = dct_denoise(img, 0.0, basis, mode);
        for (auto& v : expected.pixels()) {
            v += 17.25;
        }
        CHECK(testing::max_abs_diff(dct_denoise(shifted, 0.0, basis, mode), expected) < 1e-8);
    }
}

TEST_CASE("higher noise gives lower PSNR") {
    const Image clean = read_image(std::filesystem::path(DCT2NET_DATA_DIR) / "test" / "camera.png");
    const Image small = crop(clean, 128, 128, 128, 128);
    const TransformBasis basis = dct_basis(7);
    const double low = psnr(
        dct_denoise(add_gaussian_noise(small, {15.0, 1}), 15.0, basis, AggregationMode::adaptive),
        small);
    const double high = psnr(
        dct_denoise(add_gaussian_noise(small, {50.0, 1}), 50.0, basis, AggregationMode::adaptive),
        small);
    CHECK(low > high);
    CHECK(low > psnr(add_gaussian_noise(small, {15.0, 1}), small));
}

TEST_CASE("output does not depend on the thread count") {
    const Image img = testing::random_image(70, 45, 12);
    const DenoiserModel model = random_model(5, 3);
    const Image one = dct2net_forward(img, 20.0, model, Phase::eval, 1);
    CHECK(dct2net_forward(img, 20.0, model, Phase::eval, 3) == one);
    const Image t1 = dct2net_forward(img, 20.0, model, Phase::train, 1);
    CHECK(dct2net_forward(img, 20.0, model, Phase::train, 4) == t1);
    const Image d1 = dct_denoise(img, 20.0, model.basis(), AggregationMode::adaptive, {}, 1);
    CHECK(dct_denoise(img, 20.0, model.basis(), AggregationMode::adaptive, {}, 3) == d1);
}

TEST_CASE("patch stack without shrinkage reproduces the patches") {
    const Image img = testing::random_image(12, 10, 2);
    const DenoiserModel model = random_model(3, 8);
    const PatchStack stack = patch_forward(img, 0.0, model, Phase::eval);
    const PatchStack direct = extract_patches(reflect_pad(img, 1), 3);
    CHECK(stack.count() == 120);
    CHECK((stack.values - direct.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("uniform aggregation of the patch stack is the uniform denoiser") {
    const Image img = testing::random_image(25, 19, 4);
    const DenoiserModel model = dct_model(5);
    const PatchStack stack = patch_forward(img, 25.0, model, Phase::eval);
    const Image a = aggregate_uniform(stack, img.height(), img.width());
    const Image b = dct_denoise(img, 25.0, model.basis(), AggregationMode::uniform);
    CHECK(testing::max_abs_diff(a, b) < 1e-8);
    CHECK_THROWS(aggregate_uniform(stack, 26, 19));
}

TEST_CASE("train-phase forward approaches eval-phase on a clean margin") {
    // with large m the smooth pieces are within rounding of the hard ones
    // unless a coefficient sits near the threshold
    const Image img = testing::smooth_image(20, 20, 1);
    const DenoiserModel sharp(dct_basis(3), 200);
    const Image eval = dct2net_forward(img, 2.0, sharp, Phase::eval);
    const Image train = dct2net_forward(img, 2.0, sharp, Phase::train);
    CHECK(testing::max_abs_diff(eval, train) < 0.5);
}

TEST_CASE("model files round-trip bit-exactly") {
    const auto dir = testing::tmp_dir("denoiser_model");
    DenoiserModel model = random_model(5, 21);
    model.meta()["note"] = "x";
    save_model(model, dir / "a.model");
    const DenoiserModel back = load_model(dir / "a.model");
    CHECK(back.p() == 5);
    CHECK(back.m() == 32);
    CHECK(back.threshold_scale() == 3.0);
    CHECK(back.meta() == model.meta());
    CHECK(std::memcmp(back.basis().matrix().data(), model.basis().matrix().data(),
                      sizeof(double) * 625) == 0);
    CHECK(serialize_model(back) == serialize_model(model));
}

TEST_CASE("corrupt model files are rejected") {
    const std::vector<std::uint8_t> good = serialize_model(dct_model(3));
    std::vector<std::uint8_t> truncated(good.begin(), good.end() - 5);
    CHECK_THROWS_AS(deserialize_model(truncated), ModelError);
    std::vector<std::uint8_t> magic = good;
    magic[0] = 'X';
    CHECK_THROWS_AS(deserialize_model(magic), ModelError);
    CHECK_THROWS_AS(deserialize_model(std::vector<std::uint8_t>(good.begin(), good.begin() + 10)),
                    ModelError);

    const nlohmann::json header{{"version", 1}, {"p", 13}, {"m", 32}, {"threshold_scale", 3.0},
                                {"meta", nlohmann::json::object()}};
    try {
        deserialize_model(model_bytes(header, 81 * 81));
        FAIL("dimension mismatch accepted");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("dimension mismatch") != std::string::npos);
    }
    nlohmann::json v2 = header;
    v2["version"] = 2;
    CHECK_THROWS_AS(deserialize_model(model_bytes(v2, 169 * 169)), ModelError);
    nlohmann::json even = header;
    even["p"] = 4;
    CHECK_THROWS_AS(deserialize_model(model_bytes(even, 256)), ModelError);
    // a singular matrix is not a usable model
    CHECK_THROWS_AS(deserialize_model(model_bytes(header, 169 * 169)), ModelError);
    CHECK_THROWS_AS(load_model("/nonexistent/a.model"), IoError);
}

}
