#pragma once

#include <stdexcept>
#include <string>

namespace algstab {

/// Malformed arguments: dimension mismatches, out-of-range parameters.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A signal model or perturbation that violates a structural requirement
/// (asymmetric graph input, non-commuting family, kernel out of range).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectral-path failures: non-normal family, failed joint diagonalization.
class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or unreadable input file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace algstab
