#pragma once

#include <stdexcept>
#include <string>

namespace proxima {

/// Invalid argument supplied by the caller (bad exponent, dimension mismatch, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge within its iteration cap.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A map or sampler was configured so that it cannot be exercised
/// (e.g. rejection sampling never hits the declared set).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The declared data of a map disagrees with what was measured.
class DeclarationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace proxima
