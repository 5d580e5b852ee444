#pragma once

#include <filesystem>

#include <json.hpp>

#include "dct2net/transform.hpp"

namespace dct2net {

/// A learned (or DCT) transform plus what is needed to run it.
///
/// threshold_scale is the c in lambda = c * sigma (3 unless the model was
/// trained with another constant); m is the smooth-shrink order used while
/// training. meta carries free-form provenance.
class DenoiserModel {
public:
    DenoiserModel(TransformBasis basis, int m, double threshold_scale = 3.0,
                  nlohmann::json meta = nlohmann::json::object());

    const TransformBasis& basis() const { return basis_; }
    int p() const { return basis_.p(); }
    int m() const { return m_; }
    double threshold_scale() const { return threshold_scale_; }
    const nlohmann::json& meta() const { return meta_; }
    nlohmann::json& meta() { return meta_; }

private:
    TransformBasis basis_;
    int m_;
    double threshold_scale_;
    nlohmann::json meta_;
};

inline constexpr int kModelFormatVersion = 1;

/// File layout: the 8 bytes "DCT2NET1", a little-endian uint64 header length,
/// that many bytes of JSON {version, p, m, threshold_scale, meta}, then p^4
/// little-endian IEEE-754 doubles holding P row-major.
void save_model(const DenoiserModel& model, const std::filesystem::path& path);

/// Throws ModelError on a bad magic, unknown version, truncated payload or a
/// matrix whose size disagrees with the header's p; IoError if unreadable.
DenoiserModel load_model(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_model(const DenoiserModel& model);
DenoiserModel deserialize_model(const std::vector<std::uint8_t>& bytes);

} // namespace dct2net
