#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace ginedge {

// A complex value stored as (log-magnitude, phase), so products of terms like
// e^{-n zeta} zeta^n stay representable for n up to 1e16 and beyond.
// value = exp(log_mag) * exp(i*phase).  Zero is log_mag = -inf.
struct ScaledComplex {
  double log_mag = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  static ScaledComplex zero() { return {}; }

  static ScaledComplex one() { return {0.0, 0.0}; }

  static ScaledComplex from(std::complex<double> v) {
    double a = std::abs(v);
    if (a == 0.0) return zero();
    return {std::log(a), std::arg(v)};
  }

  static ScaledComplex from_real(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), v > 0 ? 0.0 : std::acos(-1.0)};
  }

  // e^{re + i*im}
  static ScaledComplex from_exponent(double re, double im) { return {re, im}; }
  static ScaledComplex from_exponent(std::complex<double> e) {
    return {e.real(), e.imag()};
  }

  bool is_zero() const { return std::isinf(log_mag) && log_mag < 0; }

  bool finite() const { return is_zero() || std::isfinite(log_mag); }

  // Phase reduced into (-pi, pi].
  double phase_principal() const {
    double p = std::fmod(phase, 2 * std::acos(-1.0));
    const double pi = std::acos(-1.0);
    if (p <= -pi) p += 2 * pi;
    if (p > pi) p -= 2 * pi;
    return p;
  }

  std::complex<double> to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_mag), phase_principal());
  }

  // Descale relative to a reference log-magnitude: value * e^{-ref}.
  std::complex<double> to_complex_shifted(double ref) const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_mag - ref), phase_principal());
  }

  friend ScaledComplex operator*(ScaledComplex a, ScaledComplex b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.log_mag + b.log_mag, a.phase + b.phase};
  }

  friend ScaledComplex operator/(ScaledComplex a, ScaledComplex b) {
    if (a.is_zero()) return zero();
    return {a.log_mag - b.log_mag, a.phase - b.phase};
  }

  friend ScaledComplex operator*(ScaledComplex a, std::complex<double> c) {
    return a * from(c);
  }

  friend ScaledComplex operator*(ScaledComplex a, double c) {
    return a * from_real(c);
  }

  // Addition factors out the larger magnitude: a + b = a * (1 + b/a).
  friend ScaledComplex operator+(ScaledComplex a, ScaledComplex b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.log_mag < b.log_mag) std::swap(a, b);
    std::complex<double> r =
        std::polar(std::exp(b.log_mag - a.log_mag), b.phase - a.phase);
    std::complex<double> s = 1.0 + r;
    if (std::abs(s) == 0.0) return zero();
    return {a.log_mag + std::log(std::abs(s)), a.phase + std::arg(s)};
  }

  friend ScaledComplex operator-(ScaledComplex a, ScaledComplex b) {
    b.phase += std::acos(-1.0);
    return a + b;
  }

  ScaledComplex conj() const { return {log_mag, -phase}; }

  // |this| as a plain double (may overflow to inf for huge log_mag).
  double abs() const { return is_zero() ? 0.0 : std::exp(log_mag); }
};

}  // namespace ginedge
