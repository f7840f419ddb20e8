#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rps {

/// Invalid user input: bad parameters, unknown config keys, malformed files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The numerical state left the finite reals.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Harris constants requested for inputs whose contraction factor is not below one.
class NoCertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rps
