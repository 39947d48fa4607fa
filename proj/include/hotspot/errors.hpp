#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

/// Invalid or inconsistent configuration / hyperparameters (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calibration target outside the attainable moment range.
class InfeasibleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Unreadable or inconsistent input data (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or non-positive quantity produced during fitting (CLI exit code 4).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hotspot
