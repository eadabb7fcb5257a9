#pragma once

#include <stdexcept>
#include <string>

namespace holo {

/// Mismatched grid dimensions, channel counts, or incompatible array sizes.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bad or unknown configuration keys/values.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File read/write failures; message carries the offending path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dataset incompatible with the requested operation (pairing mode, index mismatch).
struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Training loss became NaN/Inf; carries the offending batch index.
struct NonFiniteLossError : std::runtime_error {
    NonFiniteLossError(const std::string& what, long batch) : std::runtime_error(what), batch_index(batch) {}
    long batch_index;
};

}  // namespace holo
