#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "ginedge/edge.hpp"
#include "ginedge/errors.hpp"
#include "ginedge/fredholm.hpp"
#include "ginedge/lapack.hpp"
#include "ginedge/rng.hpp"

namespace ginedge {

// n x n Ginibre matrix: i.i.d. centered Gaussian entries with E|x_ij|^2 = 1/n.
// Deterministic in (n, seed); entries drawn row-major.
inline Eigen::MatrixXd sample_ginibre_real(std::int64_t n,
                                           std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXd m(n, n);
  double s = 1.0 / std::sqrt(double(n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) m(i, j) = s * rng.next_normal();
  return m;
}

inline Eigen::MatrixXcd sample_ginibre_complex(std::int64_t n,
                                               std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXcd m(n, n);
  double s = 1.0 / std::sqrt(2.0 * double(n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) {
      double re = rng.next_normal(), im = rng.next_normal();
      m(i, j) = cplx(s * re, s * im);
    }
  return m;
}

inline std::vector<cplx> spectrum(const Eigen::MatrixXd& m) {
  return real_eigenvalues(m);
}

inline std::vector<cplx> spectrum(const Eigen::MatrixXcd& m) {
  return complex_eigenvalues(m);
}

struct SpectrumSummary {
  std::int64_t n = 0;
  EnsembleKind kind = EnsembleKind::complex;
  double max_re = 0.0;
  double spectral_radius = 0.0;
  // real kind only: eigenvalues exactly on the axis, and the largest
  // real part among the non-real ones
  std::optional<double> max_real_eig;
  std::optional<double> max_re_nonreal;
  std::int64_t n_real_eigs = 0;
  // present exactly when the corresponding scaling constant is positive
  std::optional<double> rescaled_max_re;   // via gamma_n
  std::optional<double> rescaled_radius;   // via alpha_n
  std::uint64_t seed = 0;
};

inline SpectrumSummary extreme_stats(const std::vector<cplx>& eigs,
                                     std::int64_t n, EnsembleKind kind,
                                     std::uint64_t seed = 0) {
  SpectrumSummary s;
  s.n = n;
  s.kind = kind;
  s.seed = seed;
  double max_re = -1e300, rad = 0.0, max_real = -1e300,
         max_re_nr = -1e300;
  std::int64_t nreal = 0;
  for (cplx e : eigs) {
    max_re = std::max(max_re, e.real());
    rad = std::max(rad, std::abs(e));
    if (e.imag() == 0.0) {  // exact under the real-Schur path
      ++nreal;
      max_real = std::max(max_real, e.real());
    } else {
      max_re_nr = std::max(max_re_nr, e.real());
    }
  }
  s.max_re = max_re;
  s.spectral_radius = rad;
  if (kind == EnsembleKind::real) {
    s.n_real_eigs = nreal;
    if (nreal > 0) s.max_real_eig = max_real;
    if (nreal < std::int64_t(eigs.size())) s.max_re_nonreal = max_re_nr;
  }
  double nn = double(n);
  double g = gamma_n_raw(n);
  if (g > 0)
    s.rescaled_max_re =
        (max_re - 1.0 - std::sqrt(g / (4 * nn))) * std::sqrt(4 * g * nn);
  double a = alpha_n_raw(n);
  if (a > 0)
    s.rescaled_radius =
        (rad - 1.0 - std::sqrt(a / (4 * nn))) * std::sqrt(4 * nn * a);
  return s;
}

// Number of eigenvalues in the window box; the real kind counts upper-half
// representatives of conjugate pairs and excludes exactly-real eigenvalues.
inline std::int64_t count_in_window(const std::vector<cplx>& eigs,
                                    std::int64_t n, EdgeWindow window,
                                    EnsembleKind kind) {
  EdgeWindow w = resolve_window(n, window);
  double s_lo = w.threshold;
  if (w.mode == EdgeWindow::Mode::rescaled)
    s_lo = edge_point(n, w.threshold);  // throws when gamma_n <= 0
  auto in_box = [&](cplx z) {
    double xr = z.real(), yi = z.imag();
    if (w.mode == EdgeWindow::Mode::rescaled) {
      EdgeCoords c = rescale(n, z);
      return c.x >= w.threshold && c.x <= w.threshold + w.x_extent &&
             std::abs(c.y) <= w.y_extent;
    }
    return xr >= s_lo && xr <= s_lo + w.x_extent && std::abs(yi) <= w.y_extent;
  };
  std::int64_t c = 0;
  for (cplx e : eigs) {
    if (kind == EnsembleKind::real) {
      if (e.imag() <= 0.0) continue;  // pairs counted once, reals excluded
    }
    if (in_box(e)) ++c;
  }
  return c;
}

}  // namespace ginedge
