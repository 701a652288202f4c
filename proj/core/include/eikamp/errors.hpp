#pragma once

#include <stdexcept>
#include <string>

namespace eikamp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input sits on a branch boundary where the integral is divergent or not
/// defined (e.g. Delta_3^2 = 0, or an elliptic modulus of one).
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.  The best estimate
/// reached so far is kept so callers can still report it.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double value_magnitude,
                      double error_estimate)
      : Error(what),
        value_magnitude_(value_magnitude),
        error_estimate_(error_estimate) {}

  double value_magnitude() const noexcept { return value_magnitude_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_magnitude_;
  double error_estimate_;
};

/// Successive damped-integral extrapolants grow instead of settling, which
/// signals a genuinely divergent improper integral.
class ExtrapolationDivergenceError : public Error {
 public:
  using Error::Error;
};

/// The eikonal leaves the moderately small regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Malformed model file or command-line value.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace eikamp
