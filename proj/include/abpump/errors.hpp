#pragma once

#include <stdexcept>
#include <string>

namespace abpump {

/// Raised when a configuration value or argument is invalid.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an occupation vector is not part of a basis.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when time propagation or an eigensolver fails to meet its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abpump
