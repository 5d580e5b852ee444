#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dct2net/cli.hpp"
#include "dct2net/image_io.hpp"
#include "dct2net/model.hpp"
#include "dct2net/transform.hpp"
#include "helpers.hpp"

using namespace dct2net;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string output;
};

Run run(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli_output.txt";
    const std::string cmd = std::string(DCT2NET_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path small_dataset(const fs::path& dir) {
    const fs::path data = dir / "data";
    fs::create_directories(data);
    for (std::uint64_t s = 0; s < 3; ++s) {
        write_image(testing::smooth_image(40, 36, s), data / ("img" + std::to_string(s) + ".pgm"));
    }
    return data;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    const auto dir = testing::tmp_dir("cli_usage");
    CHECK(run("", dir).code == kExitUsage);
    CHECK(run("frobnicate", dir).code == kExitUsage);
    CHECK(run("denoise --in x.pgm", dir).code == kExitUsage);
    write_image(Image(16, 16, 50.0), dir / "a.pgm");
    const std::string in = (dir / "a.pgm").string();
    CHECK(run("denoise --in " + in + " --out " + (dir / "b.pgm").string() + " --sigma -1", dir).code ==
          kExitUsage);
    CHECK(run("denoise --in " + in + " --out " + (dir / "b.pgm").string() + " --sigma 5 --method dct2net",
              dir)
              .code == kExitUsage);
    CHECK(run("denoise --in " + in + " --out " + (dir / "b.pgm").string() + " --sigma 5 --method wiener",
              dir)
              .code == kExitUsage);
    CHECK(run("train --data " + dir.string() + " --out x.model --loss l1", dir).code == kExitUsage);
    CHECK(run("basis-render --out " + (dir / "r.pgm").string(), dir).code == kExitUsage);
    CHECK(run("--help", dir).code == kExitOk);
}

TEST_CASE("I/O and model errors have their own codes") {
    const auto dir = testing::tmp_dir("cli_errors");
    CHECK(run("denoise --in " + (dir / "missing.pgm").string() + " --out " + (dir / "o.pgm").string() +
                  " --sigma 5",
              dir)
              .code == kExitIo);
    std::ofstream(dir / "bad.pgm") << "P5\n3 3\n";
    CHECK(run("denoise --in " + (dir / "bad.pgm").string() + " --out " + (dir / "o.pgm").string() +
                  " --sigma 5",
              dir)
              .code == kExitIo);
    std::ofstream(dir / "bad.model") << "not a model";
    write_image(Image(16, 16, 50.0), dir / "a.pgm");
    CHECK(run("denoise --in " + (dir / "a.pgm").string() + " --out " + (dir / "o.pgm").string() +
                  " --sigma 5 --method dct2net --model " + (dir / "bad.model").string(),
              dir)
              .code == kExitModel);
}

TEST_CASE("denoise at sigma 0 writes the input back") {
    const auto dir = testing::tmp_dir("cli_identity");
    const Image img = read_image(fs::path(DCT2NET_DATA_DIR) / "fixtures" / "gradcheck12.pgm");
    write_image(img, dir / "in.pgm");
    for (const char* method : {"dct-uniform", "dct-adaptive"}) {
        const Run r = run("denoise --in " + (dir / "in.pgm").string() + " --out " +
                              (dir / "out.pgm").string() + " --sigma 0 --p 5 --method " + method,
                          dir);
        REQUIRE(r.code == kExitOk);
        CHECK(read_image(dir / "out.pgm") == img);
    }
    save_model(DenoiserModel(dct_basis(3), 32), dir / "dct3.model");
    for (const char* method : {"dct2net", "hybrid"}) {
        const Run r = run("denoise --in " + (dir / "in.pgm").string() + " --out " +
                              (dir / "out.png").string() + " --sigma 0 --method " + method +
                              " --model " + (dir / "dct3.model").string(),
                          dir);
        REQUIRE(r.code == kExitOk);
        CHECK(read_image(dir / "out.png") == img);
    }
}

TEST_CASE("denoise with a reference prints PSNR") {
    const auto dir = testing::tmp_dir("cli_ref");
    write_image(testing::smooth_image(32, 32, 2), dir / "clean.pgm");
    const Run r = run("denoise --in " + (dir / "clean.pgm").string() + " --out " +
                          (dir / "out.pgm").string() + " --sigma 20 --seed-noise 4 --p 5 --ref " +
                          (dir / "clean.pgm").string(),
                      dir);
    CHECK(r.code == kExitOk);
    CHECK(r.output.find("PSNR") != std::string::npos);
}

TEST_CASE("basis rendering has the tile grid size") {
    const auto dir = testing::tmp_dir("cli_render");
    REQUIRE(run("basis-render --dct --p 5 --out " + (dir / "dct5.pgm").string(), dir).code == kExitOk);
    const Image img = read_image(dir / "dct5.pgm");
    CHECK(img.height() == 31);
    CHECK(img.width() == 31);
    CHECK(img(0, 0) == 0.0);
    CHECK(img(1, 1) == 128.0); // the constant atom
    save_model(DenoiserModel(dct_basis(3), 32), dir / "m.model");
    REQUIRE(run("basis-render --model " + (dir / "m.model").string() + " --out " +
                    (dir / "m.png").string(),
                dir)
                .code == kExitOk);
    CHECK(read_image(dir / "m.png").height() == 13);
}

TEST_CASE("mask of a constant image is empty") {
    const auto dir = testing::tmp_dir("cli_mask");
    write_image(Image(32, 32, 90.0), dir / "flat.pgm");
    for (const char* kind : {"canny", "tv"}) {
        REQUIRE(run("mask --in " + (dir / "flat.pgm").string() + " --out " +
                        (dir / "mask.pgm").string() + " --kind " + kind,
                    dir)
                    .code == kExitOk);
        CHECK(read_image(dir / "mask.pgm") == Image(32, 32, 0.0));
    }
    CHECK(run("mask --in " + (dir / "flat.pgm").string() + " --out " + (dir / "m.pgm").string() +
                  " --dilation 4",
              dir)
              .code == kExitUsage);
}

TEST_CASE("gradcheck command") {
    const auto dir = testing::tmp_dir("cli_gradcheck");
    const Run ok = run("gradcheck --p 3", dir);
    CHECK(ok.code == kExitOk);
    CHECK(ok.output.find("max_rel_err") != std::string::npos);
    // an absurd tolerance turns the same report into a failure
    CHECK(run("gradcheck --p 3 --tol 1e-30", dir).code == kExitCheckFailed);
}

TEST_CASE("train with zero epochs writes the DCT basis") {
    const auto dir = testing::tmp_dir("cli_train0");
    const fs::path data = small_dataset(dir);
    REQUIRE(run("train --data " + data.string() + " --out " + (dir / "m.model").string() +
                    " --p 3 --epochs 0 --crop 16",
                dir)
                .code == kExitOk);
    const DenoiserModel m = load_model(dir / "m.model");
    CHECK(m.basis().matrix() == dct_basis(3).matrix());
    CHECK(m.meta()["train_files"].size() == 2);
    CHECK(m.meta()["validation_files"].size() == 1);
}

TEST_CASE("train and eval reruns are byte-identical") {
    const auto dir = testing::tmp_dir("cli_determinism");
    const fs::path data = small_dataset(dir);
    const std::string train_args = "train --data " + data.string() +
                                   " --p 3 --epochs 2 --steps-per-epoch 2 --batch 2 --crop 16"
                                   " --seed 5 --threads 1 --no-timing --out ";
    REQUIRE(run(train_args + (dir / "a.model").string(), dir).code == kExitOk);
    REQUIRE(run(train_args + (dir / "b.model").string(), dir).code == kExitOk);
    CHECK(slurp(dir / "a.model") == slurp(dir / "b.model"));
    CHECK(slurp(dir / "a.model.log.jsonl") == slurp(dir / "b.model.log.jsonl"));
    CHECK(slurp(dir / "a.model.log.jsonl").find("\"wall_ms\":0.0") != std::string::npos);

    const std::string eval_args = "eval --data " + data.string() + " --model " +
                                  (dir / "a.model").string() +
                                  " --method dct-adaptive,dct2net,hybrid --sigmas 10,25"
                                  " --noise-seed 3 --threads 1 --no-timing --json ";
    const Run ea = run(eval_args + (dir / "a.json").string(), dir);
    REQUIRE(ea.code == kExitOk);
    const Run eb = run(eval_args + (dir / "b.json").string(), dir);
    REQUIRE(eb.code == kExitOk);
    CHECK(ea.output == eb.output);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    const auto report = nlohmann::json::parse(slurp(dir / "a.json"));
    CHECK(report["rows"].size() == 18);
    CHECK(report["averages"].size() == 6);
    CHECK(ea.output.find("Average") != std::string::npos);
}

TEST_CASE("empty training directory is a usage error") {
    const auto dir = testing::tmp_dir("cli_empty");
    fs::create_directories(dir / "none");
    CHECK(run("train --data " + (dir / "none").string() + " --out " + (dir / "m.model").string(), dir)
              .code == kExitUsage);
}

TEST_CASE("eval of a constant image reports infinite PSNR") {
    const auto dir = testing::tmp_dir("cli_inf");
    fs::create_directories(dir / "flat");
    write_image(Image(32, 32, 128.0), dir / "flat" / "c.pgm");
    const Run r = run("eval --data " + (dir / "flat").string() +
                          " --method dct-adaptive --sigmas 0 --p 5 --json " +
                          (dir / "r.json").string(),
                      dir);
    REQUIRE(r.code == kExitOk);
    const auto report = nlohmann::json::parse(slurp(dir / "r.json"));
    CHECK(report["rows"][0]["psnr"] == "inf");
    CHECK(report["averages"][0]["psnr"] == "inf");
}

TEST_CASE("a trained transform renders differently from the DCT") {
    const fs::path model = fs::path(DCT2NET_MODEL_DIR) / "patch_target_p13.model";
    REQUIRE(fs::exists(model));
    const auto dir = testing::tmp_dir("cli_render_trained");
    REQUIRE(run("basis-render --model " + model.string() + " --out " + (dir / "m.pgm").string(), dir)
                .code == kExitOk);
    REQUIRE(run("basis-render --dct --p 13 --out " + (dir / "d.pgm").string(), dir).code == kExitOk);
    CHECK_FALSE(read_image(dir / "m.pgm") == read_image(dir / "d.pgm"));
    CHECK(read_image(dir / "m.pgm").height() == 183);
}

TEST_CASE("eval report helpers") {
    EvalReport report;
    report.rows = {{"a", "dct", 25, 30.0, 1.0}, {"b", "dct", 25, 32.0, 1.0},
                   {"a", "dct", 50, std::numeric_limits<double>::infinity(), 1.0}};
    compute_averages(report);
    REQUIRE(report.averages.size() == 2);
    CHECK(report.averages[0].psnr == 31.0);
    const auto j = to_json(report);
    CHECK(j["rows"][2]["psnr"] == "inf");
    CHECK(format_table(report).find("31.00") != std::string::npos);
}

TEST_CASE("dilation sweep command prints an infinite row") {
    const auto dir = testing::tmp_dir("cli_sweep");
    write_image(testing::smooth_image(40, 40, 3), dir / "c.pgm");
    save_model(DenoiserModel(dct_basis(3), 32), dir / "m.model");
    const Run r = run("dilation-sweep --in " + (dir / "c.pgm").string() + " --model " +
                          (dir / "m.model").string() + " --sizes 3,5,inf",
                      dir);
    CHECK(r.code == kExitOk);
    std::istringstream lines(r.output);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        if (!line.empty()) {
            rows.push_back(line);
        }
    }
    REQUIRE(rows.size() == 4); // header + 3 sizes
    CHECK(rows[3].rfind("inf", 0) == 0);
}

}
