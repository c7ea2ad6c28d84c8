#include <catch2/catch_amalgamated.hpp>

#include "ginedge/ensemble.hpp"

using namespace ginedge;
using Catch::Approx;

namespace {
struct BlasInit {
  BlasInit() { set_blas_threads(1); }
} blas_init;
}  // namespace

TEST_CASE("sampling is deterministic and correctly scaled", "[ensemble]") {
  auto a = sample_ginibre_real(64, 12345);
  auto b = sample_ginibre_real(64, 12345);
  REQUIRE((a - b).norm() == 0.0);  // bit-identical
  auto c = sample_ginibre_real(64, 12346);
  REQUIRE((a - c).norm() > 0.0);

  // E|x_ij|^2 = 1/n within 10% at n=200 (law of large numbers band)
  auto m = sample_ginibre_complex(200, 7);
  double mean2 = m.squaredNorm() / double(200 * 200);
  REQUIRE(mean2 == Approx(1.0 / 200).epsilon(0.10));
  auto mr = sample_ginibre_real(200, 7);
  double mean2r = mr.squaredNorm() / double(200 * 200);
  REQUIRE(mean2r == Approx(1.0 / 200).epsilon(0.10));
}

TEST_CASE("spectrum basics", "[ensemble]") {
  Eigen::MatrixXd one(1, 1);
  one(0, 0) = 0.37;
  auto e1 = spectrum(one);
  REQUIRE(e1.size() == 1);
  REQUIRE(e1[0] == cplx(0.37, 0.0));

  // companion matrix of z^2 + 1 -> {i, -i}
  Eigen::MatrixXd comp(2, 2);
  comp << 0, -1, 1, 0;
  auto e2 = spectrum(comp);
  std::sort(e2.begin(), e2.end(),
            [](cplx a, cplx b) { return a.imag() < b.imag(); });
  REQUIRE(std::abs(e2[0] - cplx(0, -1)) < 1e-14);
  REQUIRE(std::abs(e2[1] - cplx(0, 1)) < 1e-14);
  // exact conjugate pairing from the real-Schur path
  REQUIRE(e2[0] == std::conj(e2[1]));
}

TEST_CASE("similarity invariance", "[ensemble]") {
  const int n = 50;
  auto a = sample_ginibre_real(n, 99);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n) +
                      0.1 * sample_ginibre_real(n, 100);
  Eigen::MatrixXd conj_a = p.inverse() * a * p;
  auto ea = spectrum(a);
  auto eb = spectrum(conj_a);
  auto key = [](cplx z) { return std::make_pair(z.real(), z.imag()); };
  std::sort(ea.begin(), ea.end(), [&](cplx x, cplx y) { return key(x) < key(y); });
  std::sort(eb.begin(), eb.end(), [&](cplx x, cplx y) { return key(x) < key(y); });
  for (int i = 0; i < n; ++i) REQUIRE(std::abs(ea[i] - eb[i]) < 1e-8);
}

TEST_CASE("conjugation closure of real spectra is exact", "[ensemble]") {
  auto eigs = spectrum(sample_ginibre_real(150, 3));
  std::vector<cplx> upper, lower;
  for (cplx e : eigs) {
    if (e.imag() > 0) upper.push_back(e);
    if (e.imag() < 0) lower.push_back(std::conj(e));
  }
  REQUIRE(upper.size() == lower.size());
  auto key = [](cplx z) { return std::make_pair(z.real(), z.imag()); };
  std::sort(upper.begin(), upper.end(), [&](cplx x, cplx y) { return key(x) < key(y); });
  std::sort(lower.begin(), lower.end(), [&](cplx x, cplx y) { return key(x) < key(y); });
  for (std::size_t i = 0; i < upper.size(); ++i)
    REQUIRE(upper[i] == lower[i]);  // exact, not approximate
}

TEST_CASE("extreme stats", "[ensemble]") {
  std::vector<cplx> eigs = {{1, 1}, {1, -1}, {0.5, 0}};
  SpectrumSummary s = extreme_stats(eigs, 3, EnsembleKind::real, 0);
  REQUIRE(s.max_re == 1.0);
  REQUIRE(s.spectral_radius == Approx(std::sqrt(2.0)));
  REQUIRE(s.max_real_eig.value() == 0.5);
  REQUIRE(s.max_re_nonreal.value() == 1.0);
  REQUIRE(s.n_real_eigs == 1);
  // rescaled-field presence tracks the sign of the scaling constants
  SpectrumSummary t = extreme_stats(eigs, 1000000, EnsembleKind::complex, 0);
  REQUIRE(t.rescaled_radius.has_value());   // alpha(1e6) ~ 6.73 > 0
  REQUIRE_FALSE(t.rescaled_max_re.has_value());  // gamma(1e6) < 0
  // round trip: un-rescaling the radius reproduces it
  double a = alpha_n_raw(1000000);
  double back = 1.0 + std::sqrt(a / 4e6) +
                *t.rescaled_radius / std::sqrt(4e6 * a);
  REQUIRE(back == Approx(t.spectral_radius).epsilon(1e-12));
}

TEST_CASE("circular law sanity", "[ensemble]") {
  auto eigs = spectrum(sample_ginibre_complex(500, 2024));
  int inside = 0;
  for (cplx e : eigs)
    if (std::abs(e) <= 0.5) ++inside;
  REQUIRE(double(inside) / 500.0 == Approx(0.25).margin(0.03));
}

TEST_CASE("real eigenvalue count scales like sqrt(n)", "[ensemble]") {
  // mean over 200 trials at n in {100, 400}: fitted exponent 0.5 +- 0.1
  double means[2] = {0, 0};
  const std::int64_t ns[2] = {100, 400};
  for (int k = 0; k < 2; ++k) {
    double total = 0;
    for (int trial = 0; trial < 200; ++trial) {
      auto eigs = spectrum(sample_ginibre_real(ns[k], 1000 + trial));
      for (cplx e : eigs)
        if (e.imag() == 0.0) total += 1;
    }
    means[k] = total / 200.0;
  }
  double exponent = std::log(means[1] / means[0]) / std::log(4.0);
  REQUIRE(exponent == Approx(0.5).margin(0.1));
}

TEST_CASE("count_in_window", "[ensemble]") {
  std::vector<cplx> none;
  EdgeWindow w = EdgeWindow::absolute(1.0, 3.0, 3.0, 4, 4);
  REQUIRE(count_in_window(none, 200, w, EnsembleKind::complex) == 0);
  // window covering everything counts all n (complex kind)
  auto eigs = spectrum(sample_ginibre_complex(64, 5));
  EdgeWindow all = EdgeWindow::absolute(-10.0, 20.0, 20.0, 4, 4);
  REQUIRE(count_in_window(eigs, 64, all, EnsembleKind::complex) == 64);
  // real kind: pair representatives only, real eigenvalues excluded
  auto reigs = spectrum(sample_ginibre_real(64, 5));
  std::int64_t pairs = 0, reals = 0;
  for (cplx e : reigs) {
    if (e.imag() > 0) ++pairs;
    if (e.imag() == 0.0) ++reals;
  }
  REQUIRE(count_in_window(reigs, 64, all, EnsembleKind::real) == pairs);
  REQUIRE(pairs * 2 + reals == 64);
  // rescaled windows demand gamma_n > 0
  REQUIRE_THROWS_AS(
      count_in_window(eigs, 64, EdgeWindow::rescaled(0.0), EnsembleKind::complex),
      GammaNotPositive);
}
