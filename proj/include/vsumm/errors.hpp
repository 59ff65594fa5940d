#pragma once

#include <stdexcept>
#include <string>

namespace vsumm {

/// Bad or inconsistent on-disk data: malformed files, invariant violations,
/// missing annotations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (flags, hyperparameters, split definitions).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced NaN or infinity.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vsumm
