#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dct2net {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitIo = 3,
    kExitModel = 4,
};

struct EvalRow {
    std::string image;
    std::string method;
    double sigma = 0.0;
    double psnr = 0.0;
    double ms = 0.0;
};

struct EvalAverage {
    std::string method;
    double sigma = 0.0;
    double psnr = 0.0;
};

struct EvalReport {
    nlohmann::json config;
    std::vector<EvalRow> rows;
    std::vector<EvalAverage> averages;
};

/// Fills report.averages with the mean PSNR of the rows of each (method, sigma).
void compute_averages(EvalReport& report);

/// {config, rows:[{image, method, sigma, psnr, ms}], averages:[...]}; an
/// infinite PSNR is written as the string "inf".
nlohmann::json to_json(const EvalReport& report);

/// Images as rows, one column per (method, sigma), and an Average row.
std::string format_table(const EvalReport& report);

/// Entry point of the dct2net executable; returns an ExitCode.
int run_cli(int argc, char** argv);

} // namespace dct2net
