#pragma once

#include <stdexcept>
#include <string>

namespace qtoa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied parameters was violated.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Inputs are valid in general but the requested formula is singular for them.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A phase does not meet the cancellation conditions an operation requires.
class InvalidPhase : public Error {
 public:
  using Error::Error;
};

/// An iterative or adaptive routine did not reach its tolerance.
/// The best value obtained so far is kept for diagnostics.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double best_estimate = 0.0,
                   double error_estimate = 0.0)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// A sampled distribution does not contain its peak and both half-maximum crossings.
class GridTooNarrow : public NumericalFailure {
 public:
  explicit GridTooNarrow(const std::string& what) : NumericalFailure(what) {}
};

/// A floating-point table entry would exceed the representable range.
class Overflow : public Error {
 public:
  using Error::Error;
};

}  // namespace qtoa
