#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "ginedge/errors.hpp"

namespace ginedge {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_m.
inline void gauss_legendre(int m, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  const double pi = std::acos(-1.0);
  int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    weights[i] = weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

// Gauss-Legendre on [a,b].
inline void gauss_legendre(int m, double a, double b,
                           std::vector<double>& nodes,
                           std::vector<double>& weights) {
  gauss_legendre(m, nodes, weights);
  double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    nodes[i] = mid + hw * nodes[i];
    weights[i] *= hw;
  }
}

// Composite Gauss-Legendre: `panels` equal panels of `m` points each.
inline double integrate_panels(const std::function<double(double)>& f,
                               double a, double b, int panels, int m) {
  std::vector<double> x0, w0;
  gauss_legendre(m, x0, w0);
  double total = 0.0;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h, hw = 0.5 * h;
    for (int i = 0; i < m; ++i) total += hw * w0[i] * f(mid + hw * x0[i]);
  }
  return total;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol,
                               int max_depth = 40) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                      max_depth);
}

}  // namespace ginedge
