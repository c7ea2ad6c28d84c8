#include <catch2/catch_amalgamated.hpp>

#include "ginedge/edge.hpp"
#include "ginedge/rng.hpp"

using namespace ginedge;
using Catch::Approx;

TEST_CASE("gamma_n values and positivity threshold", "[edge]") {
  REQUIRE(gamma_n(10000000000LL) == Approx(1.0353482573864517).epsilon(1e-12));
  REQUIRE(gamma_n(1000000000000LL) == Approx(2.8821294583956108).epsilon(1e-12));
  REQUIRE(gamma_n(10000000000000000LL) ==
          Approx(6.7680944632542499).epsilon(1e-12));
  try {
    gamma_n(1000000);
    FAIL("expected GammaNotPositive");
  } catch (const GammaNotPositive& e) {
    REQUIRE(e.value == Approx(-2.2927578691866630).epsilon(1e-10));
    REQUIRE(e.min_n == kMinGammaPositiveN);
  }
  // the sign flips exactly at the advertised threshold
  REQUIRE_THROWS_AS(gamma_n(kMinGammaPositiveN - 1), GammaNotPositive);
  REQUIRE(gamma_n(kMinGammaPositiveN) > 0.0);
  REQUIRE(gamma_n(kMinGammaPositiveN) < 1e-8);
  REQUIRE_THROWS(gamma_n(2));
}

TEST_CASE("alpha_n values and threshold", "[edge]") {
  REQUIRE(alpha_n(1000000) == Approx(6.7260496626029070).epsilon(1e-12));
  REQUIRE(alpha_n(200) == Approx(0.1256617158557724).epsilon(1e-10));
  REQUIRE_THROWS_AS(alpha_n(kMinAlphaPositiveN - 1), GammaNotPositive);
  REQUIRE(alpha_n(kMinAlphaPositiveN) > 0.0);
  // the two scaling constants never coincide
  for (std::int64_t n : {200LL, 100000LL, 10000000000LL, 1000000000000000LL})
    REQUIRE(std::abs(alpha_n_raw(n) - gamma_n_raw(n)) > 0.1);
}

TEST_CASE("e^{-gamma/2} closed-form identity", "[edge]") {
  // exp(-gamma/2) * n^{1/4} / (2^{1/4} pi (log n)^{5/4}) = 1 exactly
  for (std::int64_t n : {1000000000LL, 10000000000LL, 77123456789LL,
                         10000000000000000LL}) {
    double g = gamma_n_raw(n);
    double ln = std::log(double(n));
    double lhs = std::exp(-g / 2) * std::pow(double(n), 0.25) /
                 (std::pow(2.0, 0.25) * kPi * std::pow(ln, 1.25));
    REQUIRE(lhs == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("edge_point", "[edge]") {
  const std::int64_t n = 10000000000LL;
  double g = gamma_n(n);
  REQUIRE(edge_point(n, 0.0) == Approx(1.0 + std::sqrt(g / (4e10))).epsilon(1e-15));
  // t = -2 gamma cancels the shift back to 1
  REQUIRE(edge_point(n, -2 * g) == Approx(1.0).margin(1e-12));
  // frozen oracle value at t=1
  REQUIRE(edge_point(n, 1.0) == Approx(1.0000100015084358).margin(1e-14));
  REQUIRE_THROWS_AS(edge_point(1000, 0.0), GammaNotPositive);
  REQUIRE(edge_t_in_range(n, 0.4));
  REQUIRE_FALSE(edge_t_in_range(n, 2.0));
}

TEST_CASE("rescale/to_plane round trips", "[edge]") {
  const std::int64_t n = 10000000000LL;
  REQUIRE(std::abs(to_plane(n, 0, 0) - cplx(edge_point(n, 0), 0.0)) == 0.0);
  CounterRng rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    double x = 8 * (rng.next_uniform() - 0.3);
    double y = 12 * (rng.next_uniform() - 0.5);
    EdgeCoords c = rescale(n, to_plane(n, x, y));
    REQUIRE(c.x == Approx(x).margin(1e-12 * std::max(1.0, std::abs(x))));
    REQUIRE(c.y == Approx(y).margin(1e-12 * std::max(1.0, std::abs(y))));
    REQUIRE(c.gamma == Approx(gamma_n(n)));
  }
  // frozen: z = edge_point(n,1) + i (gamma n)^{-1/4}
  cplx z = to_plane(n, 1.0, 1.0);
  REQUIRE(z.real() == Approx(edge_point(n, 1.0)).epsilon(1e-15));
  REQUIRE(z.imag() == Approx(0.0031349338827333).epsilon(1e-12));
}
