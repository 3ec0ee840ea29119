#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anderson {

enum class ErrorKind {
  InvalidConfig,
  Dimension,
  OutOfRange,
  Convergence,
  Numerical,
  InsufficientData,
  NonpositiveSlope,
  DegenerateInput,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Inverse iteration or LM ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations, double residual)
      : Error(ErrorKind::Convergence, what), iterations_(iterations), residual_(residual) {}
  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

}  // namespace anderson
