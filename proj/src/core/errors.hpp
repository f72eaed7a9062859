#pragma once

#include <stdexcept>
#include <string>

namespace jcrnet {

// Error categories, aligned with process exit codes.
enum class Status : int {
    Ok = 0,
    Usage = 1,    // bad call / bad arguments
    Data = 2,     // malformed files, shape mismatches, bad configuration
    Numeric = 3,  // NaN/Inf, failed finite-difference checks
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    Status status() const { return status_; }

private:
    Status status_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error(Status::Usage, what) {}
};

// Tensor extents do not line up.
struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(Status::Data, what) {}
};

// Invalid hyperparameters, unknown op kinds, missing parameters.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(Status::Data, what) {}
};

// Malformed or truncated files (images, checkpoints, configs).
struct FormatError : Error {
    explicit FormatError(const std::string& what) : Error(Status::Data, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(Status::Data, what) {}
};

// NaN/Inf values, non-deterministic functions under check, training blowups.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(Status::Numeric, what) {}
};

}  // namespace jcrnet
