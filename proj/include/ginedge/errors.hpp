#pragma once

#include <stdexcept>
#include <string>

namespace ginedge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// gamma_n(n) <= 0: the Gumbel rescaling does not exist at this n.
struct GammaNotPositive : Error {
  double value;   // the (non-positive) formula value
  long long min_n; // smallest n with gamma_n > 0
  GammaNotPositive(const std::string& msg, double v, long long m)
      : Error(msg), value(v), min_n(m) {}
};

// Input lies in no backend's validity region (special functions).
struct RegimeError : Error {
  using Error::Error;
};

// Asymptotic formula requested outside its stated validity region.
struct ValidityError : Error {
  using Error::Error;
};

// Quadrature truncation tail bound exceeds the configured tolerance.
struct TruncationError : Error {
  double bound;
  double tolerance;
  TruncationError(const std::string& msg, double b, double tol)
      : Error(msg), bound(b), tolerance(tol) {}
};

// Test function violates a support/symmetry precondition.
struct SupportError : Error {
  using Error::Error;
};

// Persisted file has an incompatible schema version.
struct SchemaError : Error {
  using Error::Error;
};

// Eigensolver failed to converge.
struct ConvergenceError : Error {
  using Error::Error;
};

}  // namespace ginedge
