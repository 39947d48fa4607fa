// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance [criterion ...] [--threads N] [--report-only] [--report FILE]
// Without arguments every criterion runs. Exit status is the number of
// failed criteria; with --report-only it is nonzero only when a criterion
// could not be evaluated (an exception escaped).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include "hotspot/eval.hpp"
#include "hotspot/model_config.hpp"
#include "hotspot/simqtl.hpp"
#include "hotspot/special_fn.hpp"
#include "hotspot/vb/fit.hpp"
#include "hotspot/vb/updates.hpp"
#include "vb_oracle.hpp"

using namespace hotspot;
using namespace hotspot::vb;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int g_threads = 0;

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

template <class A, class B>
double max_rel(const A& a, const B& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, rel_diff(a.data()[i], b.data()[i]));
  return m;
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// ---------------------------------------------------------------------------
// Shared fitting helpers

sim::SimScenario reference_scenario() { return sim::SimScenario{}; }

ModelSpec global_local_spec(std::size_t p, std::size_t q, double e_p, double v_p) {
  return ModelSpec::global_local(p, q, calibrate_zeta_prior({e_p, v_p}, p).prior);
}

FitOptions fit_options(const AnnealingSchedule& schedule, std::size_t restarts = 1,
                       unsigned long long seed = 0) {
  FitOptions o;
  o.schedule = schedule;
  o.restarts = restarts;
  o.rng_seed = seed;
  o.threads = g_threads;
  return o;
}

struct Fitted {
  Eigen::MatrixXd ppi;  // rows of the raw predictor set
  FitResult result;
};

// Centers, drops constant predictors and maps ppi back to the raw rows.
Fitted fit_raw(const DataSet& raw, const std::function<ModelSpec(std::size_t, std::size_t)>& spec,
               const FitOptions& opts) {
  const auto prep = prepare_dataset(raw);
  Fitted f{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(raw.p()), static_cast<Eigen::Index>(raw.q())),
           fit(prep.data, spec(prep.data.p(), prep.data.q()), opts)};
  for (std::size_t k = 0; k < prep.kept_predictors.size(); ++k)
    f.ppi.row(static_cast<Eigen::Index>(prep.kept_predictors[k])) =
        f.result.summary.ppi.row(static_cast<Eigen::Index>(k));
  return f;
}

// ---------------------------------------------------------------------------
// 1. Table 2

Outcome table2() {
  const double var[] = {1e-4, 1e-3, 1e-2};
  const std::size_t qs[] = {5, 10, 50, 100};
  const double published[3][4] = {{1.0, 1.1, 1.5, 2.1}, {1.4, 2.0, 6.5, 12.2}, {6.0, 12.3, 62.4, 125.4}};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const BetaPropensitySpec b(0.1, var[i]);
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(multiplicity_penalty_ratio(b.a(), b.b(), 20000, qs[j]) -
                                       published[i][j]));
  }
  return {worst <= 0.05, fmt("12 cells, max |ratio - published| = %.4f (tol 0.05)", worst)};
}

// ---------------------------------------------------------------------------
// 2. ELBO monotonicity

Outcome elbo_monotone() {
  sim::SimScenario sc;
  sc.n = 100;
  sc.p = 100;
  sc.q = 200;
  sc.chunk_size = 100;
  sc.n_active_snps = 5;
  sc.n_active_resps = 40;
  double worst = std::numeric_limits<double>::infinity();
  std::size_t rows = 0, drops = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    sc.seed = 1000 + r;
    const auto ds = sim::simulate(sc, 0);
    const auto f = fit_raw(
        ds.data, [](std::size_t p, std::size_t q) { return global_local_spec(p, q, 2.0, 100.0); },
        fit_options(make_schedule(2.0, 10)));
    const auto& tr = f.result.trace;
    for (std::size_t i = 1; i < tr.size(); ++i) {
      if (std::isnan(tr[i].elbo) || std::isnan(tr[i - 1].elbo)) continue;
      ++rows;
      const double d = (tr[i].elbo - tr[i - 1].elbo) / std::abs(tr[i - 1].elbo);
      worst = std::min(worst, d);
      if (d < -1e-8) ++drops;
    }
  }
  return {drops == 0 && rows > 0,
          fmt("20 datasets, %zu cold steps, %zu drops, min relative change %.3g", rows, drops, worst)};
}

// ---------------------------------------------------------------------------
// 3. Updates against the scalar oracle

Outcome updates_vs_oracle() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const bool fixed = rep % 4 == 3;
    auto rc = oracle::random_case(rng, fixed);
    Problem prob(rc.X, rc.Y);
    const auto t = static_cast<Eigen::Index>(rep % rc.Y.cols());
    auto a = rc.st, b = rc.st;
    update_beta_gamma_z(a, prob, rc.spec, t);
    oracle::beta_gamma_z(b, rc.X, rc.Y, rc.spec, t);
    worst = std::max({worst, max_rel(a.gamma1, b.gamma1), max_rel(a.mu_beta, b.mu_beta),
                      max_rel(a.sig2_beta, b.sig2_beta), max_rel(a.z1, b.z1)});
    update_tau(a, prob, rc.spec, t);
    oracle::tau(b, rc.X, rc.Y, rc.spec, t);
    worst = std::max({worst, max_rel(a.eta_tau, b.eta_tau), max_rel(a.kappa_tau, b.kappa_tau)});
    a = rc.st;
    b = rc.st;
    update_sigma(a, rc.spec);
    oracle::sigma(b, rc.spec);
    worst = std::max({worst, rel_diff(a.nu_sigma, b.nu_sigma), rel_diff(a.rho_sigma, b.rho_sigma)});
    if (fixed) {
      update_omega(a, rc.spec);
      oracle::omega(b, rc.spec);
      worst = std::max({worst, max_rel(a.omega_a, b.omega_a), max_rel(a.omega_b, b.omega_b)});
      continue;
    }
    update_zeta(a, rc.spec);
    oracle::zeta(b, rc.spec);
    worst = std::max({worst, max_rel(a.mu_zeta, b.mu_zeta), max_rel(a.sig2_zeta, b.sig2_zeta)});
    update_theta(a, rc.spec);
    oracle::theta(b, rc.spec);
    worst = std::max({worst, max_rel(a.mu_theta, b.mu_theta), max_rel(a.sig2_theta, b.sig2_theta)});
    update_global_scales(a, rc.spec);
    oracle::global_scales(b, rc.spec);
    worst = std::max({worst, rel_diff(a.nu_sigma0, b.nu_sigma0), rel_diff(a.rho_sigma0, b.rho_sigma0),
                      rel_diff(a.nu_xi, b.nu_xi), rel_diff(a.rho_xi, b.rho_xi)});
    update_lambda(a, rc.spec, LogMomentMode::kQuadrature);
    oracle::lambda(b, rc.spec);
    worst = std::max({worst, max_rel(a.lambda_rate, b.lambda_rate), max_rel(a.lambda2inv1, b.lambda2inv1)});
  }
  double worst_quad = 0.0;
  for (double c : {0.3, 0.5, 1.0})
    for (double L = 1e-3; L < 200.0; L *= 1.7)
      worst_quad = std::max(worst_quad, rel_diff(lambda_moment(c, L), oracle::lambda_quadrature(c, L)));
  return {worst <= 1e-10 && worst_quad <= 1e-8,
          fmt("100 states, max rel diff %.2e (tol 1e-10); lambda vs quadrature %.2e (tol 1e-8)", worst,
              worst_quad)};
}

// ---------------------------------------------------------------------------
// 4. Null calibration

Outcome null_calibration() {
  const auto sc = reference_scenario();
  std::size_t max_size = 0;
  std::vector<double> fp;
  // First replicate, eight independent shufflings of the sample labels.
  const auto base = sim::simulate(sc, 0);
  for (std::uint64_t r = 0; r < 8; ++r) {
    auto ds = base;
    auto rng = sim::make_rng(sc.seed, r, 77);
    ds.data.Y = sim::permute_responses(base.data.Y, rng);
    const auto f = fit_raw(
        ds.data, [](std::size_t p, std::size_t q) { return global_local_spec(p, q, 2.0, 100.0); },
        fit_options(make_schedule(2.0, 10)));
    const auto calls = eval::call_hotspots(f.ppi, 0.5);
    std::size_t sel = 0;
    for (auto s : calls.sizes) {
      max_size = std::max(max_size, s);
      sel += s;
    }
    fp.push_back(static_cast<double>(sel) / static_cast<double>(f.ppi.size()));
  }
  const double m = mean(fp);
  return {max_size <= 4 && m <= 1e-4,
          fmt("8 permutations, max hotspot size %zu (tol 4), mean FP proportion %.2e (tol 1e-4)",
              max_size, m)};
}

// ---------------------------------------------------------------------------
// 5 and 10. Method ordering and hotspot-size recovery

struct OrderingRun {
  std::vector<std::vector<double>> pauc;  // model x replicate
  std::vector<std::size_t> true_sizes, gl_sizes, fixed01_sizes;  // replicate 0, planted hotspots
};

OrderingRun& ordering_run() {
  static OrderingRun run;
  static bool done = false;
  if (done) return run;
  const auto sc = reference_scenario();
  const double e_p = 2.0;
  const double mu = e_p / static_cast<double>(sc.p);
  const double fractions[] = {1.0, 0.5, 0.1};
  run.pauc.assign(4, {});
  for (std::uint64_t r = 0; r < 16; ++r) {
    const auto ds = sim::simulate(sc, r);
    const auto opts = fit_options(make_schedule(2.0, 10));
    std::vector<Eigen::MatrixXd> ppis;
    ppis.push_back(fit_raw(
        ds.data, [&](std::size_t p, std::size_t q) { return global_local_spec(p, q, e_p, 100.0); },
        opts).ppi);
    for (double f : fractions) {
      const BetaPropensitySpec beta(mu, f * f * mu * mu);
      ppis.push_back(fit_raw(
          ds.data, [&](std::size_t p, std::size_t q) { return ModelSpec::fixed_beta(p, q, beta); },
          opts).ppi);
    }
    for (std::size_t m = 0; m < 4; ++m)
      run.pauc[m].push_back(eval::std_partial_auc(eval::score_matrix(ppis[m], &ds.truth.pattern), 0.01));
    std::fprintf(stderr, "  replicate %2llu  pAUC gl %.1f  fixed %.1f %.1f %.1f\n",
                 static_cast<unsigned long long>(r), run.pauc[0].back(), run.pauc[1].back(),
                 run.pauc[2].back(), run.pauc[3].back());
    if (r == 0) {
      const auto gl = eval::call_hotspots(ppis[0], 0.5).sizes;
      const auto f01 = eval::call_hotspots(ppis[3], 0.5).sizes;
      for (auto s : ds.truth.active_snps) {
        run.true_sizes.push_back(ds.truth.hotspot_sizes[s]);
        run.gl_sizes.push_back(gl[s]);
        run.fixed01_sizes.push_back(f01[s]);
      }
    }
  }
  done = true;
  return run;
}

Outcome method_ordering() {
  const auto& run = ordering_run();
  const double gl = mean(run.pauc[0]), f1 = mean(run.pauc[1]), f05 = mean(run.pauc[2]),
               f01 = mean(run.pauc[3]);
  const bool pass = gl - f01 >= 10.0 && gl >= f1 && gl >= f05;
  return {pass, fmt("mean std-pAUC global-local %.1f, fixed sigma=mu %.1f, 0.5mu %.1f, 0.1mu %.1f", gl, f1,
                    f05, f01)};
}

Outcome size_recovery() {
  const auto& run = ordering_run();
  std::vector<double> a(run.true_sizes.begin(), run.true_sizes.end());
  std::vector<double> b(run.gl_sizes.begin(), run.gl_sizes.end());
  const double rho = eval::spearman(a, b);
  std::size_t larger = 0;
  for (std::size_t i = 0; i < run.gl_sizes.size(); ++i) larger += run.gl_sizes[i] > run.fixed01_sizes[i];
  const double frac = static_cast<double>(larger) / static_cast<double>(run.gl_sizes.size());
  return {rho >= 0.8 && frac >= 0.8,
          fmt("%zu planted hotspots, Spearman %.3f (tol 0.8), global-local larger for %.0f%% (tol 80%%)",
              run.gl_sizes.size(), rho, 100.0 * frac)};
}

// ---------------------------------------------------------------------------
// 6. Annealing benefit

Outcome annealing_benefit() {
  sim::SimScenario sc;
  sc.n = 300;
  sc.p = 200;
  sc.q = 500;
  sc.chunk_size = 200;
  sc.n_active_snps = 5;
  sc.n_active_resps = 50;
  sc.resp_equicorr = {0.0, 0.5};
  sc.max_var_explained = 0.1;
  sc.seed = 4;
  const auto ds = sim::simulate(sc, 0);
  auto spec = [](std::size_t p, std::size_t q) { return global_local_spec(p, q, 1.0, 10.0); };
  auto elbos = [&](const AnnealingSchedule& s) {
    const auto f = fit_raw(ds.data, spec, fit_options(s, 50, 11));
    std::vector<double> v;
    for (const auto& r : f.result.restarts) v.push_back(r.final_elbo);
    return v;
  };
  const auto annealed = elbos(make_schedule(5.0, 20));
  const auto classical = elbos(make_schedule(1.0, 1));
  const double ma = median(annealed), mc = median(classical);
  const double xa = *std::max_element(annealed.begin(), annealed.end());
  const double xc = *std::max_element(classical.begin(), classical.end());
  return {ma >= mc && xa >= xc,
          fmt("50 restarts each, median ELBO annealed %.2f vs classical %.2f, max %.2f vs %.2f", ma, mc, xa,
              xc)};
}

// ---------------------------------------------------------------------------
// 7. Calibration verified by Monte Carlo

Outcome calibration_mc() {
  struct Target { std::size_t p; double e, v; };
  const Target targets[] = {{1000, 2.0, 100.0}, {200, 1.0, 10.0}};
  double worst = 0.0;
  std::string detail;
  for (const auto& t : targets) {
    const auto cal = calibrate_zeta_prior({t.e, t.v}, t.p);
    const auto mc = monte_carlo_count_moments(cal.prior.n0, cal.prior.t0_sq, t.p, 10'000'000, 99);
    const double zm = std::abs(mc.mean - t.e) / mc.mean_se;
    const double zv = std::abs(mc.variance - t.v) / mc.variance_se;
    worst = std::max({worst, zm, zv});
    detail += fmt("p=%zu |z_mean|=%.2f |z_var|=%.2f; ", t.p, zm, zv);
  }
  return {worst <= 3.0, detail + "tol 3 SE"};
}

// ---------------------------------------------------------------------------
// 8. Special-function invariants

Outcome special_functions() {
  namespace sp = hotspot::special;
  namespace bq = boost::math::quadrature;
  std::size_t checks = 0, failed = 0;
  std::string first;
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && failed++ == 0) first = what;
  };
  const double pi = std::numbers::pi;

  for (double x = -8.0; x <= 8.0; x += 0.125) {
    check(std::abs(sp::std_normal_cdf(x) + sp::std_normal_cdf(-x) - 1.0) <= 1e-15, "Phi symmetry");
    check(rel_diff(std::exp(sp::log_std_normal_cdf(x)), sp::std_normal_cdf(x)) <= 1e-13, "log Phi");
    // Mills ratios against their defining quotients.
    check(rel_diff(sp::inverse_mills(x, 1), sp::std_normal_pdf(x) / sp::std_normal_cdf(x)) <= 1e-12,
          "M(u,1)");
    check(rel_diff(sp::inverse_mills(x, 0), -sp::std_normal_pdf(x) / sp::std_normal_cdf(-x)) <= 1e-12,
          "M(u,0)");
  }
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.9, 1 - 1e-9})
    check(rel_diff(sp::std_normal_cdf(sp::std_normal_quantile(p)), p) <= 1e-12, "quantile round trip");
  // Mills tail: M(u,1) ~ -u for u -> -inf, and M(-u,1) = -M(u,0).
  for (double u : {10.0, 20.0, 35.0}) {
    check(rel_diff(sp::inverse_mills(-u, 1), -sp::inverse_mills(u, 0)) <= 1e-15, "Mills reflection");
    check(std::abs(sp::inverse_mills(-u, 1) - (u + 1.0 / u)) <= 3.0 / (u * u * u), "Mills tail");
  }
  // Owen's T: special values, the reflection identity and Boost.
  for (double h : {0.0, 0.3, 1.0, 2.5}) {
    check(std::abs(sp::owens_t(h, 1.0) - 0.5 * sp::std_normal_cdf(h) * sp::std_normal_cdf(-h)) <= 1e-13,
          "T(h,1)");
    for (double a : {0.1, 0.7, 2.0}) {
      const double lhs = sp::owens_t(h, a) + sp::owens_t(a * h, 1.0 / a);
      const double rhs = 0.5 * sp::std_normal_cdf(h) + 0.5 * sp::std_normal_cdf(a * h) -
                         sp::std_normal_cdf(h) * sp::std_normal_cdf(a * h);
      check(std::abs(lhs - rhs) <= 1e-12, "T reflection");
      check(std::abs(sp::owens_t(h, a) - boost::math::owens_t(h, a)) <= 1e-12, "T vs Boost");
    }
  }
  for (double a : {0.2, 1.0, 5.0})
    check(std::abs(sp::owens_t(0.0, a) - std::atan(a) / (2.0 * pi)) <= 1e-14, "T(0,a)");
  // Incomplete gamma: recurrence, closed forms and quadrature.
  for (double x : {0.05, 0.5, 3.0, 20.0}) {
    for (double s : {0.3, 0.5, 0.9}) {
      const double lhs = sp::upper_incomplete_gamma(s + 1.0, x);
      const double rhs = s * sp::upper_incomplete_gamma(s, x) + std::pow(x, s) * std::exp(-x);
      check(rel_diff(lhs, rhs) <= 1e-12, "Gamma recurrence");
      const double quad = bq::exp_sinh<double>().integrate(
          [s](double t) { return std::pow(t, s - 1.0) * std::exp(-t); }, x,
          std::numeric_limits<double>::infinity());
      check(rel_diff(sp::upper_incomplete_gamma(s, x), quad) <= 1e-10, "Gamma quadrature");
      check(rel_diff(sp::upper_incomplete_gamma_scaled(s, x),
                     std::exp(x) * std::pow(x, -s) * sp::upper_incomplete_gamma(s, x)) <= 1e-12,
            "scaled Gamma");
    }
    check(rel_diff(sp::upper_incomplete_gamma(1.0, x), std::exp(-x)) <= 1e-13, "Gamma(1,x)");
    check(rel_diff(sp::upper_incomplete_gamma(0.5, x), std::sqrt(pi) * std::erfc(std::sqrt(x))) <= 1e-12,
          "Gamma(1/2,x)");
  }
  for (double x : {1e-3, 0.5, 1.5, 1.6, 10.0, 1e3, 1e6}) {
    const double e = sp::exp_e1(x);
    check(rel_diff(e, std::exp(x) * boost::math::expint(1, x)) <= 1e-12 || x > 700, "exp_e1 vs Boost");
    check(e < std::log1p(1.0 / x) && e > 0.5 * std::log1p(2.0 / x) && e < 1.0 / x, "exp_e1 bracket");
    check(rel_diff(sp::upper_incomplete_gamma_scaled(0.0, x), e) <= 1e-12, "scaled Gamma at s=0");
  }
  for (double x : {0.01, 0.5, 1.0, 7.3, 150.0}) {
    check(std::abs(sp::digamma(x + 1.0) - sp::digamma(x) - 1.0 / x) <= 1e-12 * std::max(1.0, 1.0 / x),
          "digamma recurrence");
    check(rel_diff(sp::digamma(x), boost::math::digamma(x)) <= 1e-12 || std::abs(sp::digamma(x)) < 1e-3,
          "digamma vs Boost");
    for (double b : {0.2, 3.0})
      check(std::abs(sp::log_beta(x, b) - (std::lgamma(x) + std::lgamma(b) - std::lgamma(x + b))) <= 1e-10,
            "log Beta");
  }
  return {failed == 0, fmt("%zu checks, %zu failed%s%s", checks, failed, failed ? ", first: " : "",
                           first.c_str())};
}

// ---------------------------------------------------------------------------
// 9. Shrinkage profile

Outcome shrinkage_profile() {
  double worst = 0.0;
  for (int k = 1; k <= 99; ++k) {
    const double x = k / 100.0;
    const double beta_half = 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
    worst = std::max(worst, rel_diff(shrinkage_factor_density(x, 1.0), beta_half));
  }
  double worst_mass = 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double alpha : {0.1, 1.0, 10.0, 1e3}) {
    const double mass = ts.integrate([alpha](double x) { return shrinkage_factor_density(x, alpha); }, 0.0,
                                     1.0, 1e-13);
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
  }
  return {worst <= 1e-12 && worst_mass <= 1e-6,
          fmt("Beta(1/2,1/2) max rel diff %.2e (tol 1e-12); max |mass - 1| %.2e (tol 1e-6)", worst,
              worst_mass)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance criteria");
  std::vector<int> only;
  app.add_option("criteria", only, "criteria to run (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--threads", g_threads, "worker threads for the fits");
  bool report_only = false;
  std::string report_path;
  app.add_option("--report", report_path, "also write the verdict lines to this file");
  app.add_flag("--report-only", report_only, "exit 0 when every criterion was evaluated");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    std::function<Outcome()> run;
    double budget_s;  // stated runtime limit
  };
  // Criterion 10 reuses the fits of criterion 5 and shares its budget.
  const std::vector<Criterion> all = {
      {1, table2, 1},           {2, elbo_monotone, 300},      {3, updates_vs_oracle, 60},
      {4, null_calibration, 1800}, {5, method_ordering, 7200}, {6, annealing_benefit, 3600},
      {7, calibration_mc, 60},  {8, special_functions, 60},   {9, shrinkage_profile, 1},
      {10, size_recovery, 7200}};

  int failures = 0, errors = 0;
  std::FILE* report = report_path.empty() ? nullptr : std::fopen(report_path.c_str(), "w");
  for (const auto& [id, run, budget] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
      ++errors;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= budget;
    failures += !pass;
    const std::string line = fmt("criterion %2d %s  %s  [%.1f s, budget %.0f s%s]\n", id,
                                 pass ? "PASS" : "FAIL", o.detail.c_str(), secs, budget,
                                 secs > budget ? ", over budget" : "");
    for (std::FILE* f : {stdout, report}) {
      if (!f) continue;
      std::fputs(line.c_str(), f);
      std::fflush(f);
    }
  }
  if (report) std::fclose(report);
  return report_only ? errors : failures;
}
