#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "ginedge/errors.hpp"
#include "ginedge/scaled_complex.hpp"

namespace ginedge {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

// Largest n for which the exact O(n) finite-sum backend is offered.
inline constexpr std::int64_t kDirectSumCutoff = 100000;

// ---------------------------------------------------------------------------
// h(1+d) = (1+d) - log(1+d) - 1 = d - log1p(d), the exponent building block.
// Computed through log1p so that n*h stays accurate when d ~ 1/sqrt(n).
// ---------------------------------------------------------------------------

inline double h_shifted(double d) { return d - std::log1p(d); }

// Complex log(1+d) without forming 1+d when d is tiny.
inline cplx clog1p(cplx d) {
  double a = d.real(), b = d.imag();
  return {0.5 * std::log1p(2 * a + a * a + b * b), std::atan2(b, 1 + a)};
}

// h_c(1+d) = d - Log(1+d); equals mu(1+d)^2.
inline cplx h_shifted_c(cplx d) { return d - clog1p(d); }

// |z|^2 - 1 without the 1+tiny cancellation.
inline double abs2_minus_one(cplx z) {
  return (z.real() - 1.0) * (z.real() + 1.0) + z.imag() * z.imag();
}

// ---------------------------------------------------------------------------
// Complementary error function, real argument.
// ---------------------------------------------------------------------------

inline double erfc(double x) { return std::erfc(x); }

// e^{x^2} erfc(x) for real x, stable for arbitrarily large x >= 0.
// Small x: direct product; x >= 3: Laplace continued fraction
//   e^{x^2} erfc(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated by modified Lentz.
inline double erfc_scaled_real(double x) {
  if (x < 0) return 2 * std::exp(x * x) - erfc_scaled_real(-x);
  if (x < 3) return std::exp(x * x) * std::erfc(x);
  const double tiny = 1e-300;
  double f = x, C = x, D = 0.0;
  for (int k = 1; k <= 300; ++k) {
    double a = 0.5 * k;
    D = x + a * D;
    if (D == 0) D = tiny;
    C = x + a / C;
    if (C == 0) C = tiny;
    D = 1 / D;
    double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return 1.0 / (kSqrtPi * f);
}

// ---------------------------------------------------------------------------
// Faddeeva function w(q) = e^{-q^2} erfc(-iq) for Im q >= 0, by Weideman's
// rational expansion (SIAM J. Numer. Anal. 31 (1994), 1497-1518), N = 48.
// Coefficients are a one-time cosine transform of (L^2+t^2)e^{-t^2}.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr int kWeidemanN = 48;

inline const std::array<double, kWeidemanN>& weideman_coeffs() {
  static const std::array<double, kWeidemanN> a = [] {
    std::array<double, kWeidemanN> c{};
    const int N = kWeidemanN, M = 2 * N, M2 = 4 * N;
    const double L = std::sqrt(N / kSqrt2);
    for (int k = 1; k <= N; ++k) {
      double s = 0.0;  // g(0) term: t = 0 -> g = L^2
      s += L * L;
      for (int m = 1; m < M; ++m) {
        double th = kPi * m / M;
        double t = L * std::tan(0.5 * th);
        double g = (L * L + t * t) * std::exp(-t * t);
        s += 2 * g * std::cos(th * k);
      }
      c[k - 1] = s / M2;
    }
    return c;
  }();
  return a;
}

inline cplx faddeeva_upper(cplx q) {
  const auto& a = weideman_coeffs();
  const double L = std::sqrt(kWeidemanN / kSqrt2);
  cplx iq = cplx(0, 1) * q;
  cplx denom = L - iq;
  cplx Z = (L + iq) / denom;
  cplx p = 0;  // sum a_k Z^{k-1}, Horner from the top
  for (int k = kWeidemanN - 1; k >= 0; --k) p = p * Z + a[k];
  return 2.0 * p / (denom * denom) + (1.0 / kSqrtPi) / denom;
}

// Asymptotic series e^{z^2}erfc(z) ~ (1/(sqrt(pi) z)) sum (-1)^k (2k-1)!!/(2z^2)^k,
// truncated at the smallest term; used for |z| >= 8 where it reaches ~1e-16.
inline cplx erfc_scaled_asymptotic(cplx z) {
  cplx inv2z2 = 0.5 / (z * z);
  cplx term = 1.0, sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k <= 40; ++k) {
    term *= -double(2 * k - 1) * inv2z2;
    double mag = std::abs(term);
    if (mag > prev) break;  // past the smallest term
    sum += term;
    prev = mag;
    if (mag < 1e-18) break;
  }
  return sum / (kSqrtPi * z);
}

}  // namespace detail

// e^{z^2} erfc(z) for complex z with |arg z| < 3pi/4.
inline ScaledComplex erfc_scaled(cplx z) {
  if (std::abs(std::arg(z)) >= 0.75 * kPi)
    throw RegimeError("erfc_scaled: |arg z| >= 3*pi/4");
  if (z.imag() == 0.0 && z.real() >= 0.0)
    return ScaledComplex::from_real(erfc_scaled_real(z.real()));
  if (std::norm(z) >= 64.0)
    return ScaledComplex::from(detail::erfc_scaled_asymptotic(z));
  if (z.real() >= 0.0)
    return ScaledComplex::from(detail::faddeeva_upper(cplx(0, 1) * z));
  // Re z < 0: erfc(z) = 2 - erfc(-z), so e^{z^2}erfc(z) = 2 e^{z^2} - E(-z).
  cplx z2 = z * z;
  ScaledComplex two_ez2 =
      ScaledComplex::from_exponent(z2.real(), z2.imag()) * 2.0;
  return two_ez2 - erfc_scaled(-z);
}

// ---------------------------------------------------------------------------
// mu(zeta) = sqrt(zeta - Log zeta - 1), branch analytic at 1 with
// mu(1+w) = w/sqrt(2) + O(w^2).  Realized as (zeta-1)*sqrt(h_c/(zeta-1)^2).
// ---------------------------------------------------------------------------

inline cplx mu(cplx zeta) {
  if (zeta.imag() == 0.0 && zeta.real() <= 0.0)
    throw RegimeError("mu: zeta on (-inf, 0]");
  cplx d = zeta - 1.0;
  if (d == 0.0) return {0.0, 0.0};
  cplx ratio = h_shifted_c(d) / (d * d);
  return d * std::sqrt(ratio);
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma ratio Gamma(n, n*zeta)/Gamma(n).
// ---------------------------------------------------------------------------

enum class GammaBackend { direct_sum, bulk_asymptotic, saddle_asymptotic };

enum class GammaBackendChoice { auto_select, direct, bulk, saddle };

struct GammaRatioResult {
  ScaledComplex value;
  GammaBackend backend;
  double est_rel_error;
};

namespace detail {

// Exact identities for integer n.  Right of the Szego curve (Re h_c >= 0 or
// |zeta| >= 1) the partial sum Q = e^{-x} sum_{l<n} x^l/l! is well
// conditioned; left of it the sum cancels to e^{-n|Re h_c|} of its peak, so
// the complementary tail Q = 1 - e^{-x} sum_{l>=n} x^l/l! is used instead.
// est_rel_error tracks the observed cancellation either way.
inline GammaRatioResult gamma_ratio_direct(std::int64_t n, cplx zeta) {
  cplx x = double(n) * zeta;
  cplx hc = h_shifted_c(zeta - 1.0);
  if (hc.real() < 0.0 && std::abs(zeta) < 1.0) {
    // leading tail term e^{-x} x^n / n! in scaled form
    double lg = std::lgamma(double(n) + 1.0);
    ScaledComplex lead = ScaledComplex::from_exponent(
        -x.real() + double(n) * std::log(std::abs(x)) - lg,
        -x.imag() + double(n) * std::arg(x));
    cplx term = 1.0, acc = 1.0;
    double peak = 1.0;
    for (std::int64_t l = n + 1;; ++l) {
      term *= x / double(l);
      acc += term;
      peak = std::max(peak, std::abs(acc));
      if (std::abs(term) < std::abs(acc) * 1e-20) break;
      if (l > n + 10000000)
        throw RegimeError("incgamma_ratio: tail series did not converge");
    }
    ScaledComplex tail = lead * ScaledComplex::from(acc);
    ScaledComplex v = ScaledComplex::one() - tail;
    double cond = peak / std::max(std::abs(acc), 1e-300);
    double sub = std::exp(std::min(tail.log_mag - v.log_mag, 600.0));
    return {v, GammaBackend::direct_sum,
            1e-16 * (double(n) * cond + (1.0 + sub))};
  }
  cplx term = 1.0, acc = 1.0;
  double log_off = 0.0, peak = 1.0;
  for (std::int64_t l = 1; l < n; ++l) {
    term *= x / double(l);
    acc += term;
    double ta = std::abs(term.real()) + std::abs(term.imag());
    double aa = std::abs(acc.real()) + std::abs(acc.imag());
    peak = std::max(peak, aa);
    if (ta > 1e250 || aa > 1e250) {
      term *= 1e-250;
      acc *= 1e-250;
      peak *= 1e-250;
      log_off += 250 * std::log(10.0);
    }
    // once past the peak term the remainder is a convergent geometric tail
    if (double(l) > std::abs(x) && ta < aa * 1e-20) break;
  }
  ScaledComplex v = ScaledComplex::from(acc);
  v.log_mag += log_off - x.real();
  v.phase -= x.imag();
  double cond = acc == 0.0 ? 1e300 : peak / std::abs(acc);
  return {v, GammaBackend::direct_sum, 1e-16 * double(n) * cond};
}

// Temme coefficient c(zeta) = 1/(zeta-1) - 1/(sqrt2 mu(zeta)); analytic at 1
// with c(1) = -1/3; the two 1/(zeta-1) poles cancel through a short series.
inline cplx temme_c(cplx zeta) {
  cplx d = zeta - 1.0;
  if (std::abs(d) < 1e-4)
    return -1.0 / 3.0 + d / 12.0;
  return 1.0 / d - 1.0 / (kSqrt2 * mu(zeta));
}

// Uniform (erfc-based) form, two-term Temme asymptotic:
//   Q(n, n zeta) = (1/2) erfc(sqrt(n) mu) + e^{-n h_c} c(zeta)/sqrt(2 pi n)
// with erfc in scaled arithmetic: erfc(w) = e^{-n h_c} E(w), and the
// reflection erfc(w) = 2 - e^{-n h_c} E(-w) when arg w leaves E's domain.
// Both sides of the transition point zeta = 1 are covered.
inline GammaRatioResult gamma_ratio_bulk(std::int64_t n, cplx zeta) {
  cplx d = zeta - 1.0;
  cplx m = mu(zeta);
  cplx w = std::sqrt(double(n)) * m;
  double nd2 = double(n) * std::norm(d);
  double est = 10.0 / std::max(1.0, nd2);
  cplx nhc = double(n) * h_shifted_c(d);
  ScaledComplex e_nhc = ScaledComplex::from_exponent(-nhc.real(), -nhc.imag());
  ScaledComplex half_erfc;
  if (w == 0.0 || std::abs(std::arg(w)) < 0.75 * kPi) {
    half_erfc = e_nhc * erfc_scaled(w) * 0.5;
  } else {
    half_erfc = ScaledComplex::one() - e_nhc * erfc_scaled(-w) * 0.5;
  }
  ScaledComplex corr =
      e_nhc * (temme_c(zeta) / std::sqrt(2 * kPi * double(n)));
  return {half_erfc + corr, GammaBackend::bulk_asymptotic, est};
}

// Saddle form: Q(n, n zeta) = [Re mu < 0] + e^{-n h_c} / (sqrt(2 pi n)(zeta-1));
// the indicator supplies the bulk plateau left of the transition.
inline GammaRatioResult gamma_ratio_saddle(std::int64_t n, cplx zeta) {
  cplx d = zeta - 1.0;
  cplx nhc = double(n) * h_shifted_c(d);
  ScaledComplex v = ScaledComplex::from_exponent(-nhc.real(), -nhc.imag());
  v.log_mag -= 0.5 * std::log(2 * kPi * double(n)) + std::log(std::abs(d));
  v.phase -= std::arg(d);
  if (mu(zeta).real() < 0.0) v = ScaledComplex::one() + v;
  double est = 10.0 / std::max(1.0, double(n) * std::norm(d));
  return {v, GammaBackend::saddle_asymptotic, est};
}

}  // namespace detail

inline GammaRatioResult incgamma_ratio(
    std::int64_t n, cplx zeta,
    GammaBackendChoice choice = GammaBackendChoice::auto_select) {
  if (n < 1) throw RegimeError("incgamma_ratio: n must be >= 1");
  if (zeta == 0.0)  // Gamma(n, 0) = Gamma(n) exactly
    return {ScaledComplex::one(), GammaBackend::direct_sum, 0.0};
  switch (choice) {
    case GammaBackendChoice::direct:
      if (n > kDirectSumCutoff)
        throw RegimeError("incgamma_ratio: direct sum requested above cutoff");
      return detail::gamma_ratio_direct(n, zeta);
    case GammaBackendChoice::bulk:
      return detail::gamma_ratio_bulk(n, zeta);
    case GammaBackendChoice::saddle:
      return detail::gamma_ratio_saddle(n, zeta);
    case GammaBackendChoice::auto_select:
      break;
  }
  if (n <= kDirectSumCutoff) return detail::gamma_ratio_direct(n, zeta);
  if (zeta.imag() == 0.0 && zeta.real() <= 0.0)
    throw RegimeError("incgamma_ratio: zeta on (-inf, 0] above direct cutoff");
  double nd2 = double(n) * std::norm(zeta - 1.0);
  return nd2 >= 64.0 ? detail::gamma_ratio_saddle(n, zeta)
                     : detail::gamma_ratio_bulk(n, zeta);
}

}  // namespace ginedge
