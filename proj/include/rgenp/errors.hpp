#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rgenp {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible or out-of-range dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A matrix that had to be inverted is numerically singular.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, double sigma_min_estimate)
      : Error(what), sigma_min_estimate_(sigma_min_estimate) {}

  double sigma_min_estimate() const noexcept { return sigma_min_estimate_; }

 private:
  double sigma_min_estimate_;
};

/// Jacobi sweeps did not drive the off-diagonal measure below tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double off_diagonal)
      : Error(what), off_diagonal_(off_diagonal) {}

  double off_diagonal() const noexcept { return off_diagonal_; }

 private:
  double off_diagonal_;
};

/// GENP met a pivot whose magnitude is at or below the configured threshold.
/// `step` is 1-based.
class ZeroPivotError : public Error {
 public:
  ZeroPivotError(const std::string& what, std::size_t step, double pivot)
      : Error(what), step_(step), pivot_(pivot) {}

  std::size_t step() const noexcept { return step_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t step_;
  double pivot_;
};

/// Block elimination met a numerically singular pivot block. `step` is 1-based.
class SingularPivotBlockError : public Error {
 public:
  SingularPivotBlockError(const std::string& what, std::size_t step,
                          double sigma_min_estimate)
      : Error(what), step_(step), sigma_min_estimate_(sigma_min_estimate) {}

  std::size_t step() const noexcept { return step_; }
  double sigma_min_estimate() const noexcept { return sigma_min_estimate_; }

 private:
  std::size_t step_;
  double sigma_min_estimate_;
};

/// Random instance generation exhausted its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic would overflow its 128-bit intermediates.
class OverflowRiskError : public Error {
 public:
  using Error::Error;
};

/// Malformed matrix text or other unreadable input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rgenp
