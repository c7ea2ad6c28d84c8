// Acceptance suite: one pass/fail line per criterion.
//   usage: acceptance [k ...]   (default: run all ten)

#include <chrono>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "ginedge/harness.hpp"
#include "ginedge/quadrature.hpp"

using namespace ginedge;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

bool check(bool ok, const char* what, const std::string& detail) {
  std::printf("    %-4s %s (%s)\n", ok ? "ok" : "FAIL", what, detail.c_str());
  return ok;
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

// --- C1: kernel identity (Kn) -------------------------------------------

bool c1() {
  bool ok = true;
  for (std::int64_t n : {10, 50, 200}) {
    auto f = [&](double r) { return 2 * kPi * r * ktilde_diag(n, {r, 0.0}); };
    double integral = integrate_panels(f, 0.0, 2.0, 48, 14);
    double rel = std::abs(integral - double(n)) / double(n);
    ok &= check(rel <= 1e-8, "diagonal intensity integrates to n",
                "n=" + std::to_string(n) + " rel=" + fmt(rel));
  }
  return ok;
}

// --- C2: reproducing property (KnKn) -------------------------------------

bool c2() {
  const std::int64_t n = 50;
  CounterRng rng(1, 0);
  std::vector<double> x0, wt;
  gauss_legendre(10, x0, wt);
  const int panels = 26;
  const double lo = -1.7, hi = 1.7, h = (hi - lo) / panels;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    cplx w1, w2;
    do {
      w1 = {2 * rng.next_uniform() - 1, 2 * rng.next_uniform() - 1};
      w2 = {2 * rng.next_uniform() - 1, 2 * rng.next_uniform() - 1};
    } while (std::abs(w1) > 0.9 || std::abs(w2) > 0.9);
    cplx direct = ktilde(n, w1, w2).to_complex();
    cplx quad = 0.0;
    for (int px = 0; px < panels; ++px)
      for (int ix = 0; ix < 10; ++ix) {
        double x = lo + px * h + 0.5 * h * (1 + x0[ix]);
        for (int py = 0; py < panels; ++py)
          for (int iy = 0; iy < 10; ++iy) {
            double y = lo + py * h + 0.5 * h * (1 + x0[iy]);
            quad += 0.25 * h * h * wt[ix] * wt[iy] *
                    ktilde(n, w1, {x, y}).to_complex() *
                    ktilde(n, {x, y}, w2).to_complex();
          }
      }
    worst = std::max(worst, std::abs(quad - direct) / std::abs(direct));
  }
  return check(worst <= 1e-6, "20 random pairs reproduce K_n",
               "worst rel=" + fmt(worst));
}

// --- C3: incomplete-gamma oracle equivalence ------------------------------

bool c3() {
  bool ok = true;
  for (std::int64_t n : {100, 1000, 10000}) {
    double tol = 5.0 / std::sqrt(double(n));
    double worst = 0.0;
    auto probe = [&](cplx zeta) {
      auto ex = incgamma_ratio(n, zeta, GammaBackendChoice::direct);
      double nd2 = double(n) * std::norm(zeta - 1.0);
      auto as = nd2 >= 64.0
                    ? incgamma_ratio(n, zeta, GammaBackendChoice::saddle)
                    : incgamma_ratio(n, zeta, GammaBackendChoice::bulk);
      // scaled-space comparison: values underflow doubles for t near 2
      double rel = std::abs((as.value / ex.value).to_complex() - 1.0);
      worst = std::max(worst, rel);
    };
    for (double t = 1.05; t <= 2.0 + 1e-12; t += 0.05) probe({t, 0.0});
    for (double r : {0.05, 0.1, 0.15, 0.2})
      for (int a = 0; a < 8; ++a)
        probe(1.0 + r * std::polar(1.0, 2 * kPi * a / 8.0));
    ok &= check(worst <= tol, "asymptotic backends vs finite-sum oracle",
                "n=" + std::to_string(n) + " worst rel=" + fmt(worst) +
                    " tol=" + fmt(tol));
  }
  return ok;
}

// --- C4/C5: MC vs Fredholm cross-validation at n=200 ----------------------

bool mc_fredholm(EnsembleKind kind) {
  ExperimentConfig cfg;
  cfg.n = 200;
  cfg.kind = kind;
  cfg.trials = 10000;
  cfg.master_seed = 20240901;
  cfg.threads = default_threads();
  cfg.experiment = Experiment::gumbel;
  for (double s : {1.10, 1.15, 1.20})
    cfg.windows.push_back(EdgeWindow::absolute(s));
  ExperimentResult res = run_gumbel_experiment(cfg);
  bool ok = true;
  for (const auto& row : res.rows) {
    double z = row.z_score.value_or(1e9);
    ok &= check(std::abs(z) <= 3.0, "|z| <= 3",
                "s=" + fmt(row.threshold) + " mc=" + fmt(row.mc_estimate) +
                    " fred=" + fmt(row.fredholm_value.value_or(-1)) +
                    " se=" + fmt(row.mc_stderr) + " z=" + fmt(z));
  }
  return ok;
}

bool c4() { return mc_fredholm(EnsembleKind::complex); }
bool c5() { return mc_fredholm(EnsembleKind::real); }

// --- C6: largest real eigenvalue law --------------------------------------

bool c6() {
  ExperimentConfig cfg;
  cfg.n = 1000;
  cfg.kind = EnsembleKind::real;
  cfg.trials = 4000;
  cfg.master_seed = 31337;
  cfg.threads = default_threads();
  cfg.experiment = Experiment::real_max;
  for (double t : {1.0, 2.0}) {
    EdgeWindow w = EdgeWindow::absolute(t, 1, 1, 1, 1);
    cfg.windows.push_back(w);
  }
  ExperimentResult res = run_real_max_experiment(cfg);
  bool ok = true;
  for (const auto& row : res.rows) {
    double dev = std::abs(row.mc_estimate - *row.limit_value);
    ok &= check(dev <= 0.02, "P(max real <= 1+t/sqrt(n)) vs 1-erfc(t)/4",
                "t=" + fmt(row.threshold) + " mc=" + fmt(row.mc_estimate) +
                    " limit=" + fmt(*row.limit_value) + " dev=" + fmt(dev));
  }
  return ok;
}

// --- C7: Gumbel drift across the n-grid -----------------------------------

bool c7() {
  const std::vector<std::int64_t> ns = {10000000000LL, 1000000000000LL,
                                        100000000000000LL,
                                        10000000000000000LL};
  const std::vector<double> ts = {-1.0, 0.0, 1.0, 2.0};
  bool ok = true;
  double grid_min = 1e300, grid_max = 0.0;
  for (EnsembleKind kind : {EnsembleKind::real, EnsembleKind::complex}) {
    auto rows = drift_table(ns, ts, kind, 48, 32, default_threads());
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      double prev = 1e300, nmin = 1e300, nmax = 0.0;
      bool monotone = true;
      for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const DriftRow& r = rows[ni * ts.size() + ti];
        monotone &= r.deviation < prev;
        prev = r.deviation;
        nmin = std::min(nmin, r.normalized_deviation);
        nmax = std::max(nmax, r.normalized_deviation);
      }
      grid_min = std::min(grid_min, nmin);
      grid_max = std::max(grid_max, nmax);
      ok &= check(monotone, "deviation strictly decreasing in n",
                  std::string(to_string(kind)) + " t=" + fmt(ts[ti]) +
                      " last dev=" + fmt(prev));
      ok &= check(nmax <= 10.0 * nmin, "normalized deviation within factor 10",
                  std::string(to_string(kind)) + " t=" + fmt(ts[ti]) +
                      " range=[" + fmt(nmin) + "," + fmt(nmax) + "]");
    }
  }
  std::printf("    note: whole-grid normalized-deviation range [%s, %s]\n",
              fmt(grid_min).c_str(), fmt(grid_max).c_str());
  return ok;
}

// --- C8: trace diagnostic drift -------------------------------------------

bool c8() {
  const std::vector<std::int64_t> ns = {10000000000LL, 1000000000000LL,
                                        100000000000000LL,
                                        10000000000000000LL};
  bool ok = true;
  for (EnsembleKind kind : {EnsembleKind::complex, EnsembleKind::real}) {
    double prev = 1e300;
    bool monotone = true;
    std::string devs;
    for (std::int64_t n : ns) {
      auto [tr, lim] = trace_diagnostic(n, 0.0, kind);
      double dev = std::abs(tr - lim);
      monotone &= dev < prev;
      prev = dev;
      devs += fmt(dev) + " ";
    }
    ok &= check(monotone, "|trace - e^{-t}| strictly decreasing at t=0",
                std::string(to_string(kind)) + " devs: " + devs);
  }
  return ok;
}

// --- C9: Poisson counting --------------------------------------------------

bool c9() {
  bool ok = true;
  // choose an absolute threshold with Nystrom trace in [0.5, 1.5]
  const std::int64_t n = 200;
  double s_lo = 0.95, s_hi = 1.05, s = 1.0;
  auto trace_at = [&](double sv) {
    Grid g = build_grid(n, EdgeWindow::absolute(sv), EnsembleKind::complex);
    double tau = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      tau += g.weights[i] * ktilde_diag(n, g.nodes[i], backend_for(g));
    return tau;
  };
  for (int it = 0; it < 30; ++it) {
    s = 0.5 * (s_lo + s_hi);
    (trace_at(s) > 1.0 ? s_lo : s_hi) = s;
  }
  double tau = trace_at(s);
  ok &= check(tau >= 0.5 && tau <= 1.5, "window trace in [0.5, 1.5]",
              "s=" + fmt(s) + " tau=" + fmt(tau));

  ExperimentConfig cfg;
  cfg.n = n;
  cfg.kind = EnsembleKind::complex;
  cfg.trials = 10000;
  cfg.master_seed = 424242;
  cfg.threads = default_threads();
  cfg.experiment = Experiment::poisson_count;
  cfg.windows = {EdgeWindow::absolute(s)};
  cfg.laplace_cs = {1.0};
  ExperimentResult res = run_poisson_experiment(cfg);
  for (const auto& row : res.rows) {
    if (row.statistic == "mean_count")
      ok &= check(std::abs(*row.z_score) <= 3.0, "mean count within 3 SE of trace",
                  "mc=" + fmt(row.mc_estimate) + " tau=" +
                      fmt(*row.fredholm_value) + " z=" + fmt(*row.z_score));
    if (row.statistic == "laplace_c1")
      ok &= check(std::abs(*row.z_score) <= 3.0,
                  "E e^{-count} within 3 SE of Fredholm",
                  "mc=" + fmt(row.mc_estimate) + " fred=" +
                      fmt(*row.fredholm_value) + " z=" + fmt(*row.z_score));
  }

  // rescaled Laplace functional drifts toward exp(-(1-e^{-1}) e^{0})
  double target = std::exp(-(-std::expm1(-1.0)));
  double prev = 1e300;
  bool drift = true;
  std::string devs;
  for (std::int64_t nn : {10000000000LL, 1000000000000LL, 100000000000000LL}) {
    double gval = -std::expm1(-1.0);
    double lf = edge_det_expansion(nn, EdgeWindow::rescaled(0.0),
                                   EnsembleKind::complex, gval)
                    .probability;
    double dev = std::abs(lf - target);
    drift &= dev < prev;
    prev = dev;
    devs += fmt(dev) + " ";
  }
  ok &= check(drift, "Fredholm Laplace functional drifts to the Poisson limit",
              "t=0, target=" + fmt(target) + " devs: " + devs);
  return ok;
}

// --- C10: exact/near-exact property bundle ---------------------------------

bool c10() {
  bool ok = true;
  CounterRng rng(100, 0);

  {  // det = det2 * e^{-Tr} to 1e-10 and the det-tr bound, on several ops
    struct Case { std::int64_t n; EdgeWindow w; EnsembleKind k; };
    std::vector<Case> cases = {
        {200, EdgeWindow::absolute(1.05, NAN, NAN, 18, 12), EnsembleKind::complex},
        {200, EdgeWindow::absolute(1.02, NAN, NAN, 16, 10), EnsembleKind::real},
        {10000000000LL, EdgeWindow::rescaled(0.0, 40, 6.5, 20, 12), EnsembleKind::complex},
        {1000000000000LL, EdgeWindow::rescaled(1.0, 40, 6.5, 18, 10), EnsembleKind::real},
    };
    double worst_id = 0.0;
    bool bound_ok = true;
    for (const auto& cse : cases) {
      Grid g = build_grid(cse.n, cse.w, cse.k);
      auto op = nystrom_operator(cse.n, g, [](cplx) { return 1.0; }, cse.k);
      DetReport r = fredholm_det(op, Det2Route::eigen);
      worst_id = std::max(worst_id,
                          std::abs(r.fredholm_det - r.det2 * std::exp(-r.trace)) /
                              (1 + std::abs(r.fredholm_det)));
      double bound = r.hs_norm * std::exp((r.hs_norm + 1) * (r.hs_norm + 1) / 2 -
                                          r.trace);
      bound_ok &= std::abs(r.fredholm_det - std::exp(-r.trace)) <= bound;
    }
    ok &= check(worst_id <= 1e-10, "det = det2 e^{-Tr} on all operators",
                "worst=" + fmt(worst_id));
    ok &= check(bound_ok, "|det - e^{-Tr}| <= ||K||_2 exp((||K||_2+1)^2/2 - Tr)", "4 operators");
  }

  {  // Cauchy-Schwarz on 1e3 random pairs (direct n=200 and asymptotic 1e12)
    bool cs = true;
    for (int i = 0; i < 500; ++i) {
      cplx z(1.5 * rng.next_uniform() - 0.25, 0.9 * (rng.next_uniform() - 0.5));
      cplx w(1.5 * rng.next_uniform() - 0.25, 0.9 * (rng.next_uniform() - 0.5));
      double off = std::abs(ktilde(200, z, w).to_complex());
      cs &= off * off <=
            ktilde_diag(200, z) * ktilde_diag(200, w) * (1 + 1e-10);
    }
    const std::int64_t nbig = 1000000000000LL;
    for (int i = 0; i < 500; ++i) {
      cplx z = to_plane(nbig, 8 * rng.next_uniform() - 1,
                        10 * (rng.next_uniform() - 0.5));
      cplx w = to_plane(nbig, 8 * rng.next_uniform() - 1,
                        10 * (rng.next_uniform() - 0.5));
      double off = std::abs(ktilde(nbig, z, w).to_complex());
      cs &= off * off <=
            ktilde_diag(nbig, z) * ktilde_diag(nbig, w) * (1 + 1e-10);
    }
    ok &= check(cs, "Cauchy-Schwarz |K(z,w)|^2 <= K(z,z) K(w,w)", "1000 pairs");
  }

  {  // Hermitian symmetry
    bool herm = true;
    for (int i = 0; i < 200; ++i) {
      cplx z(1.4 * rng.next_uniform() - 0.2, 0.8 * (rng.next_uniform() - 0.5));
      cplx w(1.4 * rng.next_uniform() - 0.2, 0.8 * (rng.next_uniform() - 0.5));
      cplx a = ktilde(300, z, w).to_complex();
      cplx b = ktilde(300, w, z).to_complex();
      herm &= std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a);
    }
    ok &= check(herm, "Hermitian symmetry of ktilde", "200 pairs");
  }

  {  // rescale round trip to 1e-12
    const std::int64_t n = 10000000000LL;
    bool rt = true;
    for (int i = 0; i < 200; ++i) {
      double x = 10 * (rng.next_uniform() - 0.3);
      double y = 12 * (rng.next_uniform() - 0.5);
      EdgeCoords c = rescale(n, to_plane(n, x, y));
      rt &= std::abs(c.x - x) <= 1e-12 * std::max(1.0, std::abs(x));
      rt &= std::abs(c.y - y) <= 1e-12 * std::max(1.0, std::abs(y));
    }
    ok &= check(rt, "rescale/to_plane round trip to 1e-12", "200 points");
  }

  {  // conjugation closure of real spectra (exact)
    auto eigs = spectrum(sample_ginibre_real(100, 17));
    std::vector<cplx> up, dn;
    for (cplx e : eigs) {
      if (e.imag() > 0) up.push_back(e);
      if (e.imag() < 0) dn.push_back(std::conj(e));
    }
    auto key = [](cplx a, cplx b) {
      return std::make_pair(a.real(), a.imag()) <
             std::make_pair(b.real(), b.imag());
    };
    std::sort(up.begin(), up.end(), key);
    std::sort(dn.begin(), dn.end(), key);
    bool closed = up.size() == dn.size();
    for (std::size_t i = 0; closed && i < up.size(); ++i)
      closed &= up[i] == dn[i];
    ok &= check(closed, "conjugation closure of real spectra",
                "n=100, " + std::to_string(up.size()) + " pairs");
  }

  {  // e^{-gamma/2} algebraic identity
    double worst = 0.0;
    for (std::int64_t n : {1000000000LL, 10000000000LL, 1000000000000LL,
                           10000000000000000LL}) {
      double g = gamma_n_raw(n);
      double ln = std::log(double(n));
      double lhs = std::exp(-g / 2) * std::pow(double(n), 0.25) /
                   (std::pow(2.0, 0.25) * kPi * std::pow(ln, 1.25));
      worst = std::max(worst, std::abs(lhs - 1.0));
    }
    ok &= check(worst <= 1e-12, "exp(-gamma/2) closed-form identity",
                "worst dev=" + fmt(worst));
  }

  {  // t - log t - 1 >= delta (1-delta)(t-1)/2 on a (t, delta) grid
    bool ineq = true;
    for (double delta = 0.02; delta < 1.0; delta += 0.02)
      for (double t = 1 + delta; t <= 10.0; t += 0.05)
        ineq &= h_shifted(t - 1.0) >= delta * (1 - delta) * (t - 1) / 2 - 1e-14;
    ok &= check(ineq, "t - log t - 1 lower bound on (t, delta) grid", "grid");
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  set_blas_threads(1);
  using Fn = bool (*)();
  const std::map<int, std::pair<Fn, const char*>> criteria = {
      {1, {c1, "kernel identity: intensity integrates to n"}},
      {2, {c2, "reproducing property on 20 random pairs"}},
      {3, {c3, "incomplete-gamma oracle equivalence"}},
      {4, {c4, "MC vs Fredholm, complex n=200"}},
      {5, {c5, "MC vs Fredholm, real n=200 (block det^{1/2})"}},
      {6, {c6, "largest real eigenvalue vs 1 - erfc(t)/4"}},
      {7, {c7, "Gumbel drift over n in {1e10..1e16}"}},
      {8, {c8, "trace diagnostic drift at t=0"}},
      {9, {c9, "Poisson counting and Laplace functionals"}},
      {10, {c10, "exact/near-exact property bundle"}},
  };
  std::vector<int> todo;
  for (int i = 1; i < argc; ++i) todo.push_back(std::atoi(argv[i]));
  if (todo.empty())
    for (const auto& [k, v] : criteria) todo.push_back(k);

  int failures = 0;
  for (int k : todo) {
    auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 64;
    }
    std::printf("C%d: %s\n", k, it->second.second);
    Timer timer;
    bool ok = it->second.first();
    std::printf("[%s] criterion %d (%.1f s)\n", ok ? "PASS" : "FAIL", k,
                timer.s());
    if (!ok) ++failures;
  }
  return failures;
}
