#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "ginedge/errors.hpp"
#include "ginedge/specfun.hpp"

namespace ginedge {

// Smallest n with gamma_n > 0 (root of log n = 5 log log n + log(2 pi^4)).
inline constexpr std::int64_t kMinGammaPositiveN = 677139631;
// Smallest n with alpha_n > 0.
inline constexpr std::int64_t kMinAlphaPositiveN = 164;

// gamma_n = (log n - 5 log log n - log(2 pi^4)) / 2, no positivity check.
inline double gamma_n_raw(std::int64_t n) {
  double ln = std::log(double(n));
  return 0.5 * (ln - 5 * std::log(ln) - std::log(2 * std::pow(kPi, 4)));
}

// alpha_n = log n - 2 log log n - log(2 pi), the spectral-radius scaling.
inline double alpha_n_raw(std::int64_t n) {
  double ln = std::log(double(n));
  return ln - 2 * std::log(ln) - std::log(2 * kPi);
}

inline double gamma_n(std::int64_t n) {
  if (n < 3) throw Error("gamma_n: n must be >= 3");
  double g = gamma_n_raw(n);
  if (g <= 0)
    throw GammaNotPositive("gamma_n <= 0 at n = " + std::to_string(n) +
                               " (value " + std::to_string(g) +
                               "); minimal admissible n = " +
                               std::to_string(kMinGammaPositiveN),
                           g, kMinGammaPositiveN);
  return g;
}

inline double alpha_n(std::int64_t n) {
  if (n < 3) throw Error("alpha_n: n must be >= 3");
  double a = alpha_n_raw(n);
  if (a <= 0)
    throw GammaNotPositive("alpha_n <= 0 at n = " + std::to_string(n) +
                               "; minimal admissible n = " +
                               std::to_string(kMinAlphaPositiveN),
                           a, kMinAlphaPositiveN);
  return a;
}

// The proposition-backed range for the rescaled threshold t.
inline bool edge_t_in_range(std::int64_t n, double t) {
  return std::abs(t) <= std::sqrt(std::log(double(n))) / 10.0;
}

// Left boundary of A(t): 1 + sqrt(gamma/4n) + t/sqrt(4 gamma n), on the real axis.
inline double edge_point(std::int64_t n, double t) {
  double g = gamma_n(n);
  double nn = double(n);
  return 1.0 + std::sqrt(g / (4 * nn)) + t / std::sqrt(4 * g * nn);
}

// Rescaled edge coordinates: z = 1 + sqrt(g/4n) + x/sqrt(4gn) + i y/(gn)^{1/4}.
struct EdgeCoords {
  std::int64_t n;
  double gamma;
  double x;
  double y;
};

inline cplx to_plane(std::int64_t n, double x, double y) {
  double g = gamma_n(n);
  double nn = double(n);
  return {1.0 + std::sqrt(g / (4 * nn)) + x / std::sqrt(4 * g * nn),
          y / std::pow(g * nn, 0.25)};
}

inline EdgeCoords rescale(std::int64_t n, cplx z) {
  double g = gamma_n(n);
  double nn = double(n);
  double x = (z.real() - 1.0 - std::sqrt(g / (4 * nn))) * std::sqrt(4 * g * nn);
  double y = z.imag() * std::pow(g * nn, 0.25);
  return {n, g, x, y};
}

}  // namespace ginedge
