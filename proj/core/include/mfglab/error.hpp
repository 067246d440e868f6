#pragma once

#include <stdexcept>
#include <string>

namespace mfglab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, grids or field shapes.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

// A structural numerical property (positivity, null space, duality) failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mfglab
