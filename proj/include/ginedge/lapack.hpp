#pragma once

#include <complex>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

#include "ginedge/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace ginedge {

// Trial-level parallelism lives in the harness; BLAS stays single-threaded so
// results do not depend on scheduling.
inline void set_blas_threads(int k) { openblas_set_num_threads(k); }

struct LogDet {
  double log_abs;
  double phase;
  std::complex<double> value() const {
    return std::polar(std::exp(log_abs), phase);
  }
};

// log det(A) via pivoted LU; A is destroyed.
inline LogDet logdet_inplace(Eigen::MatrixXcd& a) {
  lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.data(), n,
                                   ipiv.data());
  if (info < 0) throw Error("zgetrf: illegal argument");
  if (info > 0) return {-std::numeric_limits<double>::infinity(), 0.0};
  LogDet r{0.0, 0.0};
  const double pi = std::acos(-1.0);
  for (lapack_int i = 0; i < n; ++i) {
    std::complex<double> u = a(i, i);
    r.log_abs += std::log(std::abs(u));
    r.phase += std::arg(u);
    if (ipiv[i] != i + 1) r.phase += pi;  // row swap flips the sign
  }
  return r;
}

inline std::vector<std::complex<double>> complex_eigenvalues(
    Eigen::MatrixXcd a) {
  lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<std::complex<double>> w(n);
  lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                    nullptr, 1, nullptr, 1);
  if (info != 0) throw ConvergenceError("zgeev failed to converge");
  return w;
}

// Eigenvalues of a real matrix through the real-Schur (QR) path: 1x1 blocks
// give exactly real eigenvalues, 2x2 blocks exact conjugate pairs.
inline std::vector<std::complex<double>> real_eigenvalues(Eigen::MatrixXd a) {
  lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<double> wr(n), wi(n);
  lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n,
                                  wr.data(), wi.data(), nullptr, 1, nullptr,
                                  1);
  if (info != 0) throw ConvergenceError("dgeev failed to converge");
  std::vector<std::complex<double>> w(n);
  for (lapack_int i = 0; i < n; ++i) w[i] = {wr[i], wi[i]};
  return w;
}

}  // namespace ginedge
