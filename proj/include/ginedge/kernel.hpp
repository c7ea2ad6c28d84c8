#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ginedge/edge.hpp"
#include "ginedge/errors.hpp"
#include "ginedge/scaled_complex.hpp"
#include "ginedge/specfun.hpp"

namespace ginedge {

// All kernel values are returned in the canonical edge gauge: ktilde carries
// an extra factor e^{-i n (arg z - arg w)} relative to the textbook
// normalization, and s_n additionally drops the separable phase
// e^{i n (Im w^2 - Im z^2)/2}.  Determinants, traces, Hilbert-Schmidt norms,
// diagonal values and |K| are gauge-invariant; the gauge is what keeps phases
// representable when n ~ 1e16 makes n*arg(z w-bar) wind through ~1e12 radians.

enum class KernelKind { ktilde, s_n, phi_n };

struct KernelValue {
  ScaledComplex value;
  KernelKind kind;
  GammaBackend backend;

  cplx to_complex() const { return value.to_complex(); }
};

struct BlockKernelValue {
  // entries[0][0]=S(z,w), [0][1]=-i S(z,w~), [1][0]=-i S(z~,w), [1][1]=S(w,z)
  ScaledComplex entries[2][2];
};

enum class KernelBackendChoice { auto_select, direct, asymptotic };

namespace detail {

inline KernelValue ktilde_direct(std::int64_t n, cplx z, cplx w) {
  cplx zeta = z * std::conj(w);
  GammaRatioResult r = incgamma_ratio(n, zeta, GammaBackendChoice::direct);
  double nn = double(n);
  ScaledComplex v = r.value;
  v.log_mag += std::log(nn / kPi) -
               0.5 * nn * (std::norm(z) + std::norm(w)) + nn * zeta.real();
  v.phase += nn * zeta.imag() - nn * (std::arg(z) - std::arg(w));
  return {v, KernelKind::ktilde, r.backend};
}

// Combined-exponent asymptotic evaluation.  The O(n) exponents of the weight
// and of the gamma-ratio asymptotics cancel analytically into
//   exp(-(n/2)[h(|z|^2) + h(|w|^2)])
// with h(t) = t - log t - 1, so nothing of size n is ever subtracted in
// floating point.
inline KernelValue ktilde_asymptotic(std::int64_t n, cplx z, cplx w) {
  cplx zeta = z * std::conj(w);
  if (zeta == 0.0 || zeta.real() <= 0.0)
    throw RegimeError("ktilde: asymptotic backend needs Re(z w~) > 0");
  double nn = double(n);
  double h1 = h_shifted(abs2_minus_one(z));
  double h2 = h_shifted(abs2_minus_one(w));
  double base = std::log(nn / kPi) - 0.5 * nn * (h1 + h2);
  cplx d = zeta - 1.0;
  double nd2 = nn * std::norm(d);
  cplx nhc = nn * h_shifted_c(d);
  // bulk plateau e^{base + n h_c}: the Q ~ 1 contribution left of the
  // transition; reduces to the circular-law density n/pi on the diagonal
  auto plateau = [&] {
    return ScaledComplex::from_exponent(base + nhc.real(), nhc.imag());
  };
  ScaledComplex v;
  GammaBackend bk;
  if (nd2 >= 64.0) {  // saddle regime: tail = e^{base}/(sqrt(2 pi n)(zeta-1))
    bk = GammaBackend::saddle_asymptotic;
    ScaledComplex tail = ScaledComplex::from_exponent(
        base - 0.5 * std::log(2 * kPi * nn) - std::log(std::abs(d)),
        -std::arg(d));
    v = mu(zeta).real() < 0.0 ? plateau() + tail : tail;
  } else {  // two-term Temme uniform form
    bk = GammaBackend::bulk_asymptotic;
    cplx m = mu(zeta);
    cplx warg = std::sqrt(nn) * m;
    ScaledComplex eb = ScaledComplex::from_exponent(base, 0.0);
    ScaledComplex corr =
        eb * (temme_c(zeta) / std::sqrt(2 * kPi * nn));
    ScaledComplex erfc_part;
    if (warg == 0.0 || std::abs(std::arg(warg)) < 0.75 * kPi)
      erfc_part = eb * erfc_scaled(warg) * 0.5;
    else
      erfc_part = plateau() - eb * erfc_scaled(-warg) * 0.5;
    v = erfc_part + corr;
  }
  return {v, KernelKind::ktilde, bk};
}

}  // namespace detail

// Weighted complex Ginibre kernel
//   ktilde(z,w) = (n/pi) e^{-n(|z|^2+|w|^2-2 z w~)/2} Gamma(n, n z w~)/Gamma(n)
// in the canonical edge gauge.
inline KernelValue ktilde(
    std::int64_t n, cplx z, cplx w,
    KernelBackendChoice choice = KernelBackendChoice::auto_select) {
  if (n < 1) throw RegimeError("ktilde: n must be >= 1");
  switch (choice) {
    case KernelBackendChoice::direct:
      return detail::ktilde_direct(n, z, w);
    case KernelBackendChoice::asymptotic:
      return detail::ktilde_asymptotic(n, z, w);
    case KernelBackendChoice::auto_select:
      break;
  }
  return n <= kDirectSumCutoff ? detail::ktilde_direct(n, z, w)
                               : detail::ktilde_asymptotic(n, z, w);
}

// One-point intensity ktilde(z,z); real and positive.
inline double ktilde_diag(
    std::int64_t n, cplx z,
    KernelBackendChoice choice = KernelBackendChoice::auto_select) {
  return ktilde(n, z, z, choice).value.to_complex().real();
}

// rho_n^k normalized so that k=1 returns the one-point intensity:
// det( ktilde(z_i, z_j) )_{i,j<=k}.
inline double k_point_correlation(
    std::int64_t n, const std::vector<cplx>& points,
    KernelBackendChoice choice = KernelBackendChoice::auto_select) {
  std::size_t k = points.size();
  if (k < 1 || k > 12)
    throw Error("k_point_correlation: k must be in [1, 12]");
  Eigen::MatrixXcd m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      m(i, j) = ktilde(n, points[i], points[j], choice).to_complex();
  return m.determinant().real();
}

// Closed-form main term of |ktilde(z,w)|^2 / (4 (gamma n)^{3/2}) in the
// near-diagonal regime of the Kernel Lemma.
inline double ktilde_asym_close(std::int64_t n, double x1, double y1,
                                double x2, double y2) {
  double g = gamma_n(n);
  double logn = std::log(double(n));
  double xn = std::hypot(x1, x2), yn2 = y1 * y1 + y2 * y2;
  if (xn + yn2 > 0.5 * std::sqrt(logn))
    throw ValidityError("ktilde_asym_close: |x|+|y|^2 > sqrt(log n)/2");
  if (std::abs(y1 - y2) >= std::pow(double(n), 0.1 - 0.25))
    throw ValidityError("ktilde_asym_close: |y1-y2| >= n^{-3/20}");
  double dy = y1 - y2;
  return g * std::exp(-x1 - x2 - y1 * y1 - y2 * y2) /
         (kPi * (g + std::sqrt(double(n) / g) * dy * dy));
}

// Uniform envelope for |ktilde(z,w)|^2 / (gamma n)^{3/2}; the multiplicative
// safety constant covers the unspecified absolute constant of the bound.
inline double ktilde_envelope(std::int64_t n, double x1, double y1, double x2,
                              double y2, double safety = 100.0) {
  if (x1 + y1 * y1 < 0 || x2 + y2 * y2 < 0)
    throw ValidityError("ktilde_envelope: needs x + y^2 >= 0");
  cplx z = to_plane(n, x1, y1), w = to_plane(n, x2, y2);
  return safety * std::norm(z) * std::norm(w) *
         std::exp(-(x1 + y1 * y1) / 3.0 - (x2 + y2 * y2) / 3.0);
}

// Phi_n(z,w) in the edge gauge: the separable oscillatory factor is dropped,
// leaving (i sqrt(pi/2)) sqrt(n) (w~ - z) sqrt(E(sqrt(2n)|Im z|) E(sqrt(2n)|Im w|))
// with E(x) = e^{x^2} erfc(x).
inline KernelValue phi_n(std::int64_t n, cplx z, cplx w) {
  double nn = double(n);
  double e1 = erfc_scaled_real(std::sqrt(2 * nn) * std::abs(z.imag()));
  double e2 = erfc_scaled_real(std::sqrt(2 * nn) * std::abs(w.imag()));
  cplx dir = cplx(0, 1) * (std::conj(w) - z);
  if (dir == 0.0) return {ScaledComplex::zero(), KernelKind::phi_n,
                          GammaBackend::bulk_asymptotic};
  ScaledComplex v = ScaledComplex::from(dir);
  v.log_mag += 0.5 * (std::log(nn) + std::log(kPi / 2.0)) +
               0.5 * (std::log(e1) + std::log(e2));
  return {v, KernelKind::phi_n, GammaBackend::bulk_asymptotic};
}

// S_n(z,w) = Phi_n(z,w) ktilde(z,w), the complex-complex entry of the real
// Ginibre matrix kernel.
inline KernelValue s_n(
    std::int64_t n, cplx z, cplx w,
    KernelBackendChoice choice = KernelBackendChoice::auto_select) {
  KernelValue p = phi_n(n, z, w);
  KernelValue k = ktilde(n, z, w, choice);
  return {p.value * k.value, KernelKind::s_n, k.backend};
}

// 2x2 block kernel K_n^{C,C}(z,w), assembled exactly as printed.
inline BlockKernelValue k_cc(
    std::int64_t n, cplx z, cplx w,
    KernelBackendChoice choice = KernelBackendChoice::auto_select) {
  auto neg_i = [](ScaledComplex v) {
    v.phase -= 0.5 * kPi;
    return v;
  };
  BlockKernelValue b;
  b.entries[0][0] = s_n(n, z, w, choice).value;
  b.entries[0][1] = neg_i(s_n(n, z, std::conj(w), choice).value);
  b.entries[1][0] = neg_i(s_n(n, std::conj(z), w, choice).value);
  b.entries[1][1] = s_n(n, w, z, choice).value;
  return b;
}

}  // namespace ginedge
