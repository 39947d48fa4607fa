#include "hotspot/model_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "hotspot/errors.hpp"
#include "hotspot/special_fn.hpp"

namespace hotspot {

using special::owens_t;
using special::std_normal_cdf;
using special::std_normal_quantile;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_counts(double a, double b, std::size_t q, std::size_t q_s) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("Beta shapes must be positive");
  if (q_s < 1 || q_s > q) throw std::domain_error("q_s must lie in [1, q]");
}

// E{Phi(X)^2} for X ~ N(mu, var).
double second_moment_phi(double mu, double var) {
  const double h = mu / std::sqrt(1.0 + var);
  return std_normal_cdf(h) - 2.0 * owens_t(h, 1.0 / std::sqrt(1.0 + 2.0 * var));
}

}  // namespace

BetaPropensitySpec::BetaPropensitySpec(double mu_omega, double sigma_omega_sq)
    : mu_(mu_omega), var_(sigma_omega_sq) {
  require(mu_ > 0.0 && mu_ < 1.0, "mu_omega must lie in (0,1), got " + fmt(mu_));
  require(var_ > 0.0, "sigma_omega_sq must be positive, got " + fmt(var_));
  const double cap = mu_ * (1.0 - mu_);
  require(var_ < cap, "sigma_omega_sq = " + fmt(var_) +
                          " violates Beta feasibility (must be < mu(1-mu) = " + fmt(cap) + ")");
  const double k = cap / var_ - 1.0;
  a_ = mu_ * k;
  b_ = (1.0 - mu_) * k;
}

ModelSpec ModelSpec::global_local(std::size_t p, std::size_t q, ZetaPrior zeta, double vague) {
  ModelSpec s;
  s.p = p;
  s.q = q;
  s.n0 = zeta.n0;
  s.t0_sq = zeta.t0_sq;
  s.eta.assign(q, vague);
  s.kappa.assign(q, vague);
  s.nu = vague;
  s.rho = vague;
  s.global_scale_sq_prior = q > 0 ? 1.0 / static_cast<double>(q) : 0.0;
  s.propensity = PropensityPrior::kGlobalLocal;
  return s;
}

ModelSpec ModelSpec::fixed_beta(std::size_t p, std::size_t q, const BetaPropensitySpec& beta,
                                double vague) {
  ModelSpec s = global_local(p, q, ZetaPrior{}, vague);
  s.propensity = PropensityPrior::kFixedBeta;
  s.beta_a = beta.a();
  s.beta_b = beta.b();
  return s;
}

void ModelSpec::validate() const {
  require(p >= 1, "model needs at least one predictor");
  require(q >= 1, "model needs at least one response");
  require(eta.size() == q && kappa.size() == q,
          "eta/kappa must have one entry per response");
  for (std::size_t t = 0; t < q; ++t) {
    require(eta[t] > 0.0 && std::isfinite(eta[t]), "eta must be positive and finite");
    require(kappa[t] > 0.0 && std::isfinite(kappa[t]), "kappa must be positive and finite");
  }
  require(nu > 0.0 && rho > 0.0, "nu and rho must be positive");
  require(std::isfinite(n0), "n0 must be finite");
  require(t0_sq >= 0.0 && std::isfinite(t0_sq), "t0_sq must be non-negative");
  if (propensity == PropensityPrior::kGlobalLocal) {
    require(global_scale_sq_prior > 0.0 && std::isfinite(global_scale_sq_prior),
            "global_scale_sq_prior must be positive");
  } else {
    require(beta_a > 0.0 && beta_b > 0.0, "Beta propensity shapes must be positive");
  }
}

double prior_odds(double a, double b, std::size_t q, std::size_t q_s) {
  check_counts(a, b, q, q_s);
  return (b + static_cast<double>(q) - static_cast<double>(q_s)) /
         (a + static_cast<double>(q_s) - 1.0);
}

double multiplicity_penalty_ratio(double a, double b, std::size_t q, std::size_t q_s) {
  check_counts(a, b, q, q_s);
  return prior_odds(a, b, q, 1) / prior_odds(a, b, q, q_s);
}

PredictorCountMoments predictor_count_moments(double n0, double t0_sq, std::size_t p) {
  const double pp = static_cast<double>(p);
  const double m = std_normal_cdf(n0 / std::sqrt(1.0 + t0_sq));
  const double e = pp * m;
  const double m2 = second_moment_phi(n0, t0_sq);
  return {e, pp * (pp - 1.0) * m2 + e * (1.0 - e)};
}

CalibrationResult calibrate_zeta_prior(const SparsityTarget& target, std::size_t p) {
  const double pp = static_cast<double>(p);
  if (p < 2) throw ConfigError("calibration needs p >= 2");
  if (!(target.e_p > 0.0 && target.e_p < pp))
    throw ConfigError("e_p must lie in (0, p), got " + fmt(target.e_p));
  if (!(target.v_p >= 0.0)) throw ConfigError("v_p must be non-negative");

  const double m = target.e_p / pp;
  const double h = std_normal_quantile(m);
  const double v_min = pp * m * (1.0 - m);
  const double v_max = pp * pp * m * (1.0 - m);

  CalibrationResult out;
  if (std::fabs(target.v_p - v_min) <= 1e-12 * v_min) {
    out.prior = {m == 0.5 ? 0.0 : h, 0.0};
    out.degenerate = true;
  } else {
    if (target.v_p < v_min || target.v_p >= v_max) {
      throw InfeasibleError("V_p = " + fmt(target.v_p) + " is not attainable for E_p = " +
                            fmt(target.e_p) + ", p = " + std::to_string(p) +
                            "; attainable variance range is [" + fmt(v_min) + ", " +
                            fmt(v_max) + ")");
    }
    // Var = p(p-1)[m - 2T(h, a)] + e(1-e) with a = (1 + 2 t0^2)^{-1/2}; T is
    // increasing in a, so the variance equation is a monotone 1-D root in a.
    const double t_target =
        0.5 * (m - (target.v_p - target.e_p * (1.0 - target.e_p)) / (pp * (pp - 1.0)));
    auto f = [&](double a) { return owens_t(h, a) - t_target; };
    std::uintmax_t iters = 200;
    boost::math::tools::eps_tolerance<double> tol(52);
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, 1.0, tol, iters);
    const double a = 0.5 * (lo + hi);
    const double t0_sq = 0.5 * (1.0 / (a * a) - 1.0);
    out.prior = {h * std::sqrt(1.0 + t0_sq), t0_sq};
  }
  const auto mom = predictor_count_moments(out.prior.n0, out.prior.t0_sq, p);
  out.mean_residual = (mom.mean - target.e_p) / target.e_p;
  out.var_residual = target.v_p > 0.0 ? (mom.variance - target.v_p) / target.v_p : mom.variance;
  return out;
}

double shrinkage_factor_density(double kappa, double alpha) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::domain_error("kappa must lie in (0,1)");
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
  return std::sqrt(alpha) / (std::numbers::pi * std::sqrt(kappa * (1.0 - kappa)) *
                             (1.0 + kappa * (alpha - 1.0)));
}

double alpha_of_sigma0(double sigma0_sq, std::size_t q, double t0_sq) {
  if (!(sigma0_sq > 0.0) || !(t0_sq >= 0.0)) throw std::domain_error("alpha_of_sigma0");
  return static_cast<double>(q) * sigma0_sq / (1.0 + t0_sq);
}

double posterior_mean_theta_given_z(double z_bar_centered, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::domain_error("kappa must lie in [0,1]");
  return (1.0 - kappa) * z_bar_centered;
}

FiniteQError finite_q_approximation_error(double n0, double t0_sq, double q) {
  // w = sigma_0 lambda for two standard half-Cauchy variables has density
  // 4 log(w) / (pi^2 (w^2 - 1)); theta has variance w^2 / q.
  auto density = [](double w) {
    const double d = w - 1.0;
    const double r = std::fabs(d) < 1e-6 ? (1.0 - 0.5 * d + d * d / 3.0) / (w + 1.0)
                                         : std::log(w) / (d * (w + 1.0));
    return 4.0 / (std::numbers::pi * std::numbers::pi) * r;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  auto expect = [&](auto&& g) {
    auto f = [&](double u) {
      const double w = std::tan(u);
      const double c = std::cos(u);
      return density(w) * g(w * w / q) / (c * c);
    };
    return ts.integrate(f, 0.0, std::numbers::pi / 4) +
           ts.integrate(f, std::numbers::pi / 4, std::numbers::pi / 2);
  };
  auto first = [&](double s2) { return std_normal_cdf(n0 / std::sqrt(1.0 + t0_sq + s2)); };
  auto second = [&](double s2) { return second_moment_phi(n0, t0_sq + s2); };
  return {std::fabs(expect(first) - std_normal_cdf(n0 / std::sqrt(1.0 + t0_sq))),
          std::fabs(expect(second) - second_moment_phi(n0, t0_sq))};
}

MonteCarloMoments monte_carlo_count_moments(double n0, double t0_sq, std::size_t p,
                                            std::size_t draws, unsigned long long seed) {
  require(draws >= 2, "at least two Monte Carlo draws are needed");
  require(t0_sq >= 0.0, "t0_sq must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(n0, std::sqrt(t0_sq));
  // Welford accumulators for u = Phi(zeta) and w = Phi(zeta)^2.
  double mu = 0.0, mw = 0.0, cuu = 0.0, cww = 0.0, cuw = 0.0;
  for (std::size_t i = 1; i <= draws; ++i) {
    const double u = std_normal_cdf(t0_sq > 0.0 ? norm(rng) : n0);
    const double w = u * u;
    const double du = u - mu, dw = w - mw;
    mu += du / static_cast<double>(i);
    mw += dw / static_cast<double>(i);
    cuu += du * (u - mu);
    cww += dw * (w - mw);
    cuw += du * (w - mw);
  }
  const double nd = static_cast<double>(draws), pp = static_cast<double>(p);
  const double vuu = cuu / (nd - 1) / nd, vww = cww / (nd - 1) / nd, vuw = cuw / (nd - 1) / nd;
  MonteCarloMoments out;
  out.draws = draws;
  out.mean = pp * mu;
  out.mean_se = pp * std::sqrt(vuu);
  out.variance = pp * (pp - 1) * mw + out.mean * (1 - out.mean);
  const double g1 = pp - 2 * pp * pp * mu;  // d variance / d E Phi
  const double g2 = pp * (pp - 1);          // d variance / d E Phi^2
  out.variance_se = std::sqrt(std::max(0.0, g1 * g1 * vuu + g2 * g2 * vww + 2 * g1 * g2 * vuw));
  return out;
}

}  // namespace hotspot
