#pragma once

#include <stdexcept>
#include <string>

namespace dct2net {

/// Malformed or unsupported image/model file contents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corrupt, mismatched or unusable denoiser model.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical precondition failure (singular matrix, non-SPD input, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dct2net
