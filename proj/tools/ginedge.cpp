// Command-line front end for Ginibre edge statistics: Monte Carlo
// experiments, Fredholm determinants and kernel identity checks.
//
// Exit codes: 0 success, 1 validation/usage error, 2 numerical-regime error
// (for example gamma_n <= 0 for a rescaled request).

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include "ginedge/harness.hpp"

using namespace ginedge;

namespace {

bool g_json_errors = false;

int fail(int code, const std::string& type, const std::string& msg) {
  if (g_json_errors) {
    json j;
    j["error"] = {{"type", type}, {"message", msg}, {"exit_code", code}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
  } else {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
  }
  return code;
}

// n is often given in scientific notation (1e12); parse via double and
// require integrality.
std::int64_t parse_n(const std::string& s) {
  double v = std::stod(s);
  if (!(v >= 1 && v <= 9.2e18)) throw CLI::ValidationError("--n out of range");
  double r = std::round(v);
  if (std::abs(v - r) > 1e-6 * std::max(1.0, std::abs(v)))
    throw CLI::ValidationError("--n must be an integer");
  return std::int64_t(r);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

std::vector<std::int64_t> parse_n_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_n(item));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

EnsembleKind parse_kind(const std::string& s) {
  if (s == "real") return EnsembleKind::real;
  if (s == "complex") return EnsembleKind::complex;
  throw CLI::ValidationError("--kind must be real or complex");
}

json det_report_json(const DetReport& r) {
  json j;
  j["fredholm_det"] = r.fredholm_det;
  j["det2"] = r.det2;
  j["trace"] = r.trace;
  j["hs_norm"] = r.hs_norm;
  j["truncation_bound"] = r.truncation_bound;
  j["quadrature_order"] = {r.m_x, r.m_y};
  j["probability"] = r.probability;
  j["kind"] = to_string(r.kind);
  j["det2_route"] = r.det2_route == Det2Route::eigen ? "eigen"
                    : r.det2_route == Det2Route::algebraic ? "algebraic"
                                                           : "trace_expansion";
  j["expansion_tail"] = r.expansion_tail;
  j["ill_conditioned"] = r.ill_conditioned;
  return j;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::fwrite(content.data(), 1, content.size(), stdout);
  else
    atomic_write_text(path, content);
}

struct CommonMc {
  std::string n_str = "200";
  std::string kind_str = "complex";
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  int threads = default_threads();
};

void add_common(CLI::App* cmd, CommonMc& c) {
  cmd->add_option("--n", c.n_str, "matrix dimension (scientific ok, e.g. 1e3)");
  cmd->add_option("--kind", c.kind_str, "real | complex");
  cmd->add_option("--trials", c.trials, "Monte Carlo trials");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output JSON path (default stdout)");
  cmd->add_option("--csv", c.csv, "also write comparison CSV here");
  cmd->add_option("--threads", c.threads, "worker pool size");
}

void run_and_emit(ExperimentConfig cfg, const CommonMc& c) {
  ExperimentResult res = run_experiment(cfg);
  json j = to_json(res);
  emit(c.out, j.dump(2) + "\n");
  if (!c.csv.empty()) atomic_write_text(c.csv, comparison_csv(res.rows));
}

}  // namespace

int main(int argc, char** argv) {
  set_blas_threads(1);
  CLI::App app{"Ginibre edge statistics: Gumbel/Poisson experiments and "
               "Fredholm determinants"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json_errors, "machine-readable errors on stderr");

  // --- sample ---------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "sample one matrix, report spectrum summary");
  CommonMc sc;
  bool with_eigs = false;
  add_common(sample, sc);
  sample->add_flag("--eigs", with_eigs, "include the full spectrum");

  // --- gumbel ---------------------------------------------------------
  auto* gum = app.add_subcommand("gumbel", "max-real-part experiment vs Fredholm/Gumbel");
  CommonMc gc;
  std::string abs_thresholds, t_thresholds;
  add_common(gum, gc);
  gum->add_option("--abs-thresholds", abs_thresholds, "comma list of absolute s");
  gum->add_option("--t-thresholds", t_thresholds, "comma list of rescaled t (needs gamma_n > 0)");

  // --- poisson --------------------------------------------------------
  auto* poi = app.add_subcommand("poisson", "window counting experiment vs trace/Laplace");
  CommonMc pc;
  std::string p_abs, p_ts, p_cs = "0.5,1,2";
  add_common(poi, pc);
  poi->add_option("--abs-thresholds", p_abs, "comma list of absolute s");
  poi->add_option("--t-thresholds", p_ts, "comma list of rescaled t");
  poi->add_option("--cs", p_cs, "Laplace exponents");

  // --- radius ---------------------------------------------------------
  auto* rad = app.add_subcommand("radius", "spectral radius Gumbel experiment (alpha_n scaling)");
  CommonMc rc;
  std::string r_ts = "-2,-1,0,1,2,3";
  add_common(rad, rc);
  rad->add_option("--ts", r_ts, "comparison grid of t values");

  // --- real-max -------------------------------------------------------
  auto* rmx = app.add_subcommand("real-max", "largest real eigenvalue vs 1-erfc(t)/4");
  CommonMc xc;
  xc.kind_str = "real";
  std::string x_ts = "1,2";
  add_common(rmx, xc);
  rmx->add_option("--ts", x_ts, "t grid for thresholds 1 + t/sqrt(n)");

  // --- fredholm -------------------------------------------------------
  auto* fre = app.add_subcommand("fredholm", "gap probability / determinant report");
  std::string f_n = "200", f_kind = "complex", f_out, f_t_str, f_s_str;
  int f_mx = 48, f_my = 32;
  fre->add_option("--n", f_n, "matrix dimension");
  fre->add_option("--kind", f_kind, "real | complex");
  fre->add_option("--t", f_t_str, "rescaled threshold t (needs gamma_n > 0)");
  fre->add_option("--s", f_s_str, "absolute threshold s");
  fre->add_option("--mx", f_mx, "x quadrature order");
  fre->add_option("--my", f_my, "y quadrature order");
  fre->add_option("--out", f_out, "output JSON path (default stdout)");

  // --- kernel-check ---------------------------------------------------
  auto* kch = app.add_subcommand("kernel-check", "kernel identity and reproducing-property checks");
  std::string k_n = "50";
  std::int64_t k_pairs = 20;
  std::uint64_t k_seed = 1;
  std::string k_out;
  kch->add_option("--n", k_n, "matrix dimension");
  kch->add_option("--pairs", k_pairs, "random pairs for the reproducing check");
  kch->add_option("--seed", k_seed, "seed for the random pairs");
  kch->add_option("--out", k_out, "output JSON path (default stdout)");

  // --- drift ----------------------------------------------------------
  auto* dft = app.add_subcommand("drift", "gap probability vs Gumbel limit across an n-grid");
  std::string d_ns = "1e10,1e12,1e14", d_ts = "-1,0,1,2", d_kind = "complex", d_out;
  int d_mx = 48, d_my = 32, d_threads = default_threads();
  dft->add_option("--ns", d_ns, "comma list of n (gamma_n > 0 required)");
  dft->add_option("--ts", d_ts, "comma list of t");
  dft->add_option("--kind", d_kind, "real | complex");
  dft->add_option("--mx", d_mx, "x quadrature order");
  dft->add_option("--my", d_my, "y quadrature order");
  dft->add_option("--threads", d_threads, "worker pool size");
  dft->add_option("--out", d_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    return fail(1, "usage", e.what());
  }

  try {
    if (*sample) {
      std::int64_t n = parse_n(sc.n_str);
      EnsembleKind kind = parse_kind(sc.kind_str);
      std::vector<cplx> eigs = kind == EnsembleKind::real
                                   ? spectrum(sample_ginibre_real(n, sc.seed))
                                   : spectrum(sample_ginibre_complex(n, sc.seed));
      SpectrumSummary s = extreme_stats(eigs, n, kind, sc.seed);
      json j;
      j["schema_version"] = kResultSchemaVersion;
      j["n"] = s.n;
      j["kind"] = to_string(s.kind);
      j["seed"] = s.seed;
      j["max_re"] = s.max_re;
      j["spectral_radius"] = s.spectral_radius;
      if (s.max_real_eig) j["max_real_eig"] = *s.max_real_eig;
      if (kind == EnsembleKind::real) j["n_real_eigs"] = s.n_real_eigs;
      if (s.rescaled_max_re) j["rescaled_max_re"] = *s.rescaled_max_re;
      if (s.rescaled_radius) j["rescaled_radius"] = *s.rescaled_radius;
      if (with_eigs) {
        json arr = json::array();
        for (cplx e : eigs) arr.push_back({e.real(), e.imag()});
        j["eigenvalues"] = arr;
      }
      emit(sc.out, j.dump(2) + "\n");
      return 0;
    }

    if (*gum || *poi) {
      CommonMc& c = *gum ? gc : pc;
      ExperimentConfig cfg;
      cfg.n = parse_n(c.n_str);
      cfg.kind = parse_kind(c.kind_str);
      cfg.trials = c.trials;
      cfg.master_seed = c.seed;
      cfg.threads = c.threads;
      cfg.experiment = *gum ? Experiment::gumbel : Experiment::poisson_count;
      cfg.out_path = c.out;
      const std::string& abs_s = *gum ? abs_thresholds : p_abs;
      const std::string& ts_s = *gum ? t_thresholds : p_ts;
      if (abs_s.empty() == ts_s.empty())
        return fail(1, "usage", "give exactly one of --abs-thresholds / --t-thresholds");
      if (!abs_s.empty())
        for (double s : parse_list(abs_s))
          cfg.windows.push_back(EdgeWindow::absolute(s));
      else
        for (double t : parse_list(ts_s))
          cfg.windows.push_back(EdgeWindow::rescaled(t));
      if (*poi) cfg.laplace_cs = parse_list(p_cs);
      run_and_emit(cfg, c);
      return 0;
    }

    if (*rad || *rmx) {
      CommonMc& c = *rad ? rc : xc;
      ExperimentConfig cfg;
      cfg.n = parse_n(c.n_str);
      cfg.kind = parse_kind(c.kind_str);
      cfg.trials = c.trials;
      cfg.master_seed = c.seed;
      cfg.threads = c.threads;
      cfg.experiment = *rad ? Experiment::radius : Experiment::real_max;
      cfg.out_path = c.out;
      for (double t : parse_list(*rad ? r_ts : x_ts)) {
        EdgeWindow w = EdgeWindow::absolute(t);
        w.x_extent = w.y_extent = 1.0;  // threshold-only rows
        cfg.windows.push_back(w);
      }
      run_and_emit(cfg, c);
      return 0;
    }

    if (*fre) {
      std::int64_t n = parse_n(f_n);
      EnsembleKind kind = parse_kind(f_kind);
      if (f_t_str.empty() == f_s_str.empty())
        return fail(1, "usage", "give exactly one of --t / --s");
      EdgeWindow w = f_t_str.empty()
                         ? EdgeWindow::absolute(std::stod(f_s_str))
                         : EdgeWindow::rescaled(std::stod(f_t_str));
      w.m_x = f_mx;
      w.m_y = f_my;
      DetReport rep = gap_probability(n, w, kind);
      json j;
      j["schema_version"] = kResultSchemaVersion;
      j["n"] = n;
      j["window"] = to_json(resolve_window(n, w));
      j["report"] = det_report_json(rep);
      if (w.mode == EdgeWindow::Mode::rescaled) {
        j["gumbel_limit"] = gumbel_limit_cdf(w.threshold, kind);
        if (!edge_t_in_range(n, w.threshold))
          j["warning"] = "t outside the proposition range sqrt(log n)/10";
      }
      emit(f_out, j.dump(2) + "\n");
      return 0;
    }

    if (*kch) {
      std::int64_t n = parse_n(k_n);
      // identity: integral of the diagonal intensity over |z| <= 2 equals n
      auto diag_integral = [&](std::int64_t nn) {
        auto f = [&](double r) {
          return 2 * kPi * r * ktilde_diag(nn, cplx(r, 0.0));
        };
        return integrate_panels(f, 0.0, 2.0, 48, 16);
      };
      double in = diag_integral(n);
      // reproducing property on random pairs
      CounterRng rng(k_seed, 0);
      double worst = 0.0;
      for (std::int64_t p = 0; p < k_pairs; ++p) {
        cplx w1, w2;
        do {
          w1 = {2 * rng.next_uniform() - 1, 2 * rng.next_uniform() - 1};
          w2 = {2 * rng.next_uniform() - 1, 2 * rng.next_uniform() - 1};
        } while (std::abs(w1) > 0.9 || std::abs(w2) > 0.9);
        cplx direct = ktilde(n, w1, w2).to_complex();
        cplx quad = 0.0;
        int panels = 30, order = 8;
        std::vector<double> x0, wt;
        gauss_legendre(order, x0, wt);
        double lo = -1.7, hi = 1.7, h = (hi - lo) / panels;
        for (int px = 0; px < panels; ++px)
          for (int ix = 0; ix < order; ++ix) {
            double x = lo + px * h + 0.5 * h * (1 + x0[ix]);
            for (int py = 0; py < panels; ++py)
              for (int iy = 0; iy < order; ++iy) {
                double y = lo + py * h + 0.5 * h * (1 + x0[iy]);
                cplx z(x, y);
                quad += 0.25 * h * h * wt[ix] * wt[iy] *
                        ktilde(n, w1, z).to_complex() *
                        ktilde(n, z, w2).to_complex();
              }
          }
        worst = std::max(worst, std::abs(quad - direct) / std::abs(direct));
      }
      json j;
      j["schema_version"] = kResultSchemaVersion;
      j["n"] = n;
      j["intensity_integral"] = in;
      j["intensity_rel_error"] = std::abs(in - double(n)) / double(n);
      j["reproducing_pairs"] = k_pairs;
      j["reproducing_worst_rel_error"] = worst;
      emit(k_out, j.dump(2) + "\n");
      return 0;
    }

    if (*dft) {
      auto ns = parse_n_list(d_ns);
      auto ts = parse_list(d_ts);
      auto rows = drift_table(ns, ts, parse_kind(d_kind), d_mx, d_my, d_threads);
      emit(d_out, drift_csv(rows));
      return 0;
    }
  } catch (const GammaNotPositive& e) {
    return fail(2, "gamma_not_positive",
                std::string(e.what()) + " (rescaled windows need n >= " +
                    std::to_string(kMinGammaPositiveN) + ")");
  } catch (const TruncationError& e) {
    return fail(2, "truncation_budget", e.what());
  } catch (const RegimeError& e) {
    return fail(2, "regime", e.what());
  } catch (const ValidityError& e) {
    return fail(2, "validity_region", e.what());
  } catch (const SupportError& e) {
    return fail(1, "support", e.what());
  } catch (const SchemaError& e) {
    return fail(1, "schema", e.what());
  } catch (const CLI::ValidationError& e) {
    return fail(1, "usage", e.what());
  } catch (const Error& e) {
    return fail(1, "error", e.what());
  } catch (const std::exception& e) {
    return fail(1, "error", e.what());
  }
  return 0;
}
