#pragma once

#include <stdexcept>
#include <string>

namespace glvortex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed domain, resolution too coarse, unknown keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A point that must lie strictly inside the domain does not.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented parameter window is violated (e.g. N above the admissible count).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An iterative method failed to reach its tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace glvortex
