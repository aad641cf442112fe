#pragma once

#include <stdexcept>

namespace neurostream {

// Bad configuration, bad CLI usage, or contract misuse. CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor/shape mismatches inside the compute graph. CLI exit code 1.
struct ShapeError : ConfigError {
    using ConfigError::ConfigError;
};

// Malformed, inconsistent, or unreadable input data. CLI exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values or failed numeric checks. CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace neurostream
