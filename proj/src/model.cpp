#include "dct2net/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dct2net/error.hpp"

namespace dct2net {

namespace {

constexpr char kMagic[8] = {'D', 'C', 'T', '2', 'N', 'E', 'T', '1'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint64_t get_u64(const std::uint8_t* in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    }
    return v;
}

// smallest k with k^4 == count, or 0
long fourth_root(std::uint64_t count) {
    const long k = std::lround(std::sqrt(std::sqrt(static_cast<double>(count))));
    for (long c = std::max(1L, k - 1); c <= k + 1; ++c) {
        if (static_cast<std::uint64_t>(c * c * c * c) == count) {
            return c;
        }
    }
    return 0;
}

} // namespace

DenoiserModel::DenoiserModel(TransformBasis basis, int m, double threshold_scale,
                             nlohmann::json meta)
    : basis_(std::move(basis)), m_(m), threshold_scale_(threshold_scale), meta_(std::move(meta)) {
    if (basis_.p() < 3 || basis_.p() % 2 == 0) {
        throw ModelError("model patch side must be odd and >= 3, got " +
                         std::to_string(basis_.p()));
    }
    if (m_ < 0) {
        throw ModelError("shrink order m must be non-negative");
    }
    if (!(threshold_scale_ > 0.0)) {
        throw ModelError("threshold scale must be positive");
    }
}

std::vector<std::uint8_t> serialize_model(const DenoiserModel& model) {
    const nlohmann::json header = {
        {"version", kModelFormatVersion},
        {"p", model.p()},
        {"m", model.m()},
        {"threshold_scale", model.threshold_scale()},
        {"meta", model.meta()},
    };
    const std::string text = header.dump();
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    put_u64(out, text.size());
    out.insert(out.end(), text.begin(), text.end());
    const auto& mat = model.basis().matrix();
    out.reserve(out.size() + static_cast<std::size_t>(mat.size()) * 8);
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            put_u64(out, std::bit_cast<std::uint64_t>(mat(r, c)));
        }
    }
    return out;
}

DenoiserModel deserialize_model(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
        throw ModelError("corrupt model: bad magic");
    }
    const std::uint64_t header_len = get_u64(bytes.data() + 8);
    if (header_len > bytes.size() - 16) {
        throw ModelError("corrupt model: truncated header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + 16,
                                       bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("corrupt model: header is not JSON: ") + e.what());
    }
    int p = 0;
    int m = 0;
    double scale = 3.0;
    nlohmann::json meta = nlohmann::json::object();
    try {
        if (header.at("version").get<int>() != kModelFormatVersion) {
            throw ModelError("unsupported model version " + header.at("version").dump());
        }
        p = header.at("p").get<int>();
        m = header.at("m").get<int>();
        scale = header.value("threshold_scale", 3.0);
        meta = header.value("meta", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("corrupt model: bad header field: ") + e.what());
    }
    if (p < 1 || p > 64) {
        throw ModelError("corrupt model: patch side " + std::to_string(p) + " out of range");
    }

    const std::size_t payload = bytes.size() - 16 - header_len;
    const std::size_t n = static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
    if (payload != n * n * 8) {
        if (payload % 8 == 0) {
            if (const long k = fourth_root(payload / 8); k != 0 && k != p) {
                throw ModelError("model dimension mismatch: header p=" + std::to_string(p) +
                                 " but matrix is " + std::to_string(k * k) + "x" +
                                 std::to_string(k * k));
            }
        }
        throw ModelError("corrupt model: expected " + std::to_string(n * n * 8) +
                         " matrix bytes, found " + std::to_string(payload));
    }

    Eigen::MatrixXd mat(n, n);
    const std::uint8_t* src = bytes.data() + 16 + header_len;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c, src += 8) {
            mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                std::bit_cast<double>(get_u64(src));
        }
    }
    try {
        return DenoiserModel(TransformBasis(std::move(mat)), m, scale, std::move(meta));
    } catch (const NumericError& e) {
        throw ModelError(std::string("unusable model matrix: ") + e.what());
    }
}

void save_model(const DenoiserModel& model, const std::filesystem::path& path) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

DenoiserModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    return deserialize_model(bytes);
}

} // namespace dct2net
