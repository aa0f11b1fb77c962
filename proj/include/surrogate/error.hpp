#pragma once

#include <stdexcept>
#include <string>

namespace surrogate {

/// Category of a failure. The CLI maps these onto process exit codes.
enum class ErrorKind { config, shape, data, numeric, contract };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Invalid sizes, unknown keys, impossible requests.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Tensor or image dimensions that do not line up.
struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

/// Unreadable, unwritable or malformed files.
struct DataError : Error {
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// Non-finite values in losses, gradients or parameters.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

/// A caller broke an API contract, e.g. backward() on stale activations.
struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error(ErrorKind::contract, what) {}
};

const char* to_string(ErrorKind kind);

} // namespace surrogate
