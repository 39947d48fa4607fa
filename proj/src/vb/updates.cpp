#include "hotspot/vb/updates.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "hotspot/errors.hpp"
#include "hotspot/special_fn.hpp"

namespace hotspot::vb {

namespace sp = hotspot::special;

namespace {

constexpr double kLambdaRateFloor = 1e-300;

void require_positive(double v, const char* what, Eigen::Index i) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw NumericalError(std::string(what) + " is non-positive or non-finite at index " +
                         std::to_string(i) + " (value " + std::to_string(v) + ")");
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double global_scale(const ModelSpec& spec) { return spec.global_scale_sq_prior; }

}  // namespace

double z_first_moment(double alpha, double gamma, double c) {
  const double sc = std::sqrt(c);
  const double u = sc * alpha;
  return alpha + (gamma * sp::inverse_mills(u, 1) + (1.0 - gamma) * sp::inverse_mills(u, 0)) / sc;
}

namespace {

struct ProbitTerms {
  double logit;  // log Phi(a) - log Phi(-a)
  double m1;     // M(a, 1)
  double m0;     // M(a, 0)
};

// One erfc pair serves the prior logit and both Mills ratios at c = 1.
ProbitTerms probit_terms(double a) {
  if (std::fabs(a) >= 8.0) {
    return {sp::log_std_normal_cdf(a) - sp::log_std_normal_cdf(-a), sp::inverse_mills(a, 1),
            sp::inverse_mills(a, 0)};
  }
  // The smaller tail carries the precision; its complement is bounded below by 1.
  const double tail = std::erfc(std::fabs(a) * (1.0 / std::numbers::sqrt2));
  const double lo = a < 0.0 ? tail : 2.0 - tail;  // 2 Phi(a)
  const double hi = a < 0.0 ? 2.0 - tail : tail;  // 2 Phi(-a)
  const double pdf2 = 2.0 * sp::std_normal_pdf(a);
  return {std::log(lo / hi), pdf2 / lo, -pdf2 / hi};
}

// Per-predictor quantities shared by every response within a sweep.
struct ColumnConstants {
  Eigen::VectorXd omega_logit;  // psi(a_s) - psi(b_s); fixed-Beta model only
  Eigen::VectorXd log_prec;     // log(||x_s||^2 + sigma^{-2})
};

ColumnConstants column_constants(const VariationalState& st, const Problem& prob,
                                 const ModelSpec& spec) {
  ColumnConstants k;
  const double sinv = st.sigma_inv1();
  k.log_prec = (prob.x_sq().array() + sinv).log().matrix();
  if (spec.propensity == PropensityPrior::kFixedBeta) {
    k.omega_logit.resize(st.omega_a.size());
    for (Eigen::Index s = 0; s < k.omega_logit.size(); ++s)
      k.omega_logit[s] = sp::digamma(st.omega_a[s]) - sp::digamma(st.omega_b[s]);
  }
  return k;
}

double beta_gamma_z_column(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                           Eigen::Index t, const ColumnConstants& k) {
  const double c = st.c;
  const double tau = st.tau1(t);
  const double sinv = st.sigma_inv1();
  const double base = 0.5 * gamma_log_mean(st.nu_sigma, st.rho_sigma) +
                      0.5 * gamma_log_mean(st.eta_tau[t], st.kappa_tau[t]);
  const bool beta_prior = spec.propensity == PropensityPrior::kFixedBeta;
  const bool cold = c == 1.0;
  const double log_ctau = std::log(c * tau);
  const Eigen::MatrixXd& X = prob.X();
  auto r = st.resid.col(t);
  double max_dg = 0.0;

  for (Eigen::Index s = 0; s < prob.p(); ++s) {
    const double g_old = st.gamma1(s, t);
    const double m_old = g_old * st.mu_beta(s, t);
    const double xr = X.col(s).dot(r) + m_old * prob.x_sq()[s];

    const double prec = c * tau * (prob.x_sq()[s] + sinv);
    const double v = 1.0 / prec;
    require_positive(v, "slab variance", s);
    const double mu = c * v * tau * xr;

    double prior_logit;
    double a = 0.0;
    ProbitTerms pt{};
    if (beta_prior) {
      prior_logit = k.omega_logit[s];
    } else {
      a = st.alpha(s, t);
      if (cold) {
        pt = probit_terms(a);
        prior_logit = pt.logit;
      } else {
        prior_logit = sp::log_std_normal_cdf(a) - sp::log_std_normal_cdf(-a);
      }
    }
    const double ell = c * (base + 0.5 * mu * mu / v + -0.5 * (log_ctau + k.log_prec[s]) + prior_logit);
    const double g = logistic(ell);

    const double m_new = g * mu;
    if (m_new != m_old) r.noalias() -= (m_new - m_old) * X.col(s);
    st.sig2_beta(s, t) = v;
    st.mu_beta(s, t) = mu;
    st.gamma1(s, t) = g;
    if (!beta_prior) {
      st.z_loc(s, t) = a;
      st.z1(s, t) = cold ? a + g * pt.m1 + (1.0 - g) * pt.m0 : z_first_moment(a, g, c);
    }
    max_dg = std::max(max_dg, std::fabs(g - g_old));
  }
  return max_dg;
}

}  // namespace

double update_beta_gamma_z(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                           Eigen::Index t) {
  return beta_gamma_z_column(st, prob, spec, t, column_constants(st, prob, spec));
}

void update_tau(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                Eigen::Index t) {
  const double c = st.c;
  double sum_g = 0.0, second = 0.0, expected_sq = st.resid.col(t).squaredNorm();
  for (Eigen::Index s = 0; s < prob.p(); ++s) {
    const double g = st.gamma1(s, t);
    const double mu = st.mu_beta(s, t);
    const double e2 = g * (mu * mu + st.sig2_beta(s, t));
    const double m = g * mu;
    sum_g += g;
    second += e2;
    expected_sq += (e2 - m * m) * prob.x_sq()[s];
  }
  const double n = static_cast<double>(prob.n());
  st.eta_tau[t] = c * (spec.eta[t] + 0.5 * n + 0.5 * sum_g) - c + 1.0;
  st.kappa_tau[t] =
      c * (spec.kappa[t] + 0.5 * expected_sq + 0.5 * st.sigma_inv1() * second);
  require_positive(st.kappa_tau[t], "tau rate", t);
}

double update_responses(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                        int threads) {
  const Eigen::Index q = prob.q();
  std::vector<double> dg(static_cast<std::size_t>(q), 0.0);
  std::exception_ptr err;
  const ColumnConstants k = column_constants(st, prob, spec);
#if defined(_OPENMP)
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
#else
  (void)threads;
#endif
  for (Eigen::Index t = 0; t < q; ++t) {
    try {
      dg[static_cast<std::size_t>(t)] = beta_gamma_z_column(st, prob, spec, t, k);
      update_tau(st, prob, spec, t);
    } catch (...) {
#if defined(_OPENMP)
#pragma omp critical(hotspot_update_err)
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return dg.empty() ? 0.0 : *std::max_element(dg.begin(), dg.end());
}

void update_sigma(VariationalState& st, const ModelSpec& spec) {
  const double c = st.c;
  double sum_g = 0.0, weighted = 0.0;
  for (Eigen::Index t = 0; t < st.gamma1.cols(); ++t) {
    double col_g = 0.0, col_w = 0.0;
    for (Eigen::Index s = 0; s < st.gamma1.rows(); ++s) {
      const double g = st.gamma1(s, t);
      const double mu = st.mu_beta(s, t);
      col_g += g;
      col_w += g * (mu * mu + st.sig2_beta(s, t));
    }
    sum_g += col_g;
    weighted += col_w * st.tau1(t);
  }
  st.nu_sigma = c * (spec.nu + 0.5 * sum_g) - c + 1.0;
  st.rho_sigma = c * (spec.rho + 0.5 * weighted);
  require_positive(st.rho_sigma, "sigma rate", 0);
}

void update_zeta(VariationalState& st, const ModelSpec& spec) {
  const Eigen::Index q = st.z1.cols();
  if (spec.t0_sq == 0.0) {
    st.mu_zeta.setConstant(spec.n0);
    st.sig2_zeta.setZero();
    return;
  }
  const double c = st.c;
  const double p = static_cast<double>(st.z1.rows());
  const double prec = c * (p + 1.0 / spec.t0_sq);
  const double v = 1.0 / prec;
  const double theta_sum = st.mu_theta.sum();
  const Eigen::VectorXd zsum = st.z1.colwise().sum().transpose();
  for (Eigen::Index t = 0; t < q; ++t) {
    st.sig2_zeta[t] = v;
    st.mu_zeta[t] = c * v * (zsum[t] - theta_sum + spec.n0 / spec.t0_sq);
  }
}

void update_theta(VariationalState& st, const ModelSpec& spec) {
  const double c = st.c;
  const double q = static_cast<double>(st.z1.cols());
  const double g = global_scale(spec);
  const double s0 = st.sigma0_inv1();
  const double zeta_sum = st.mu_zeta.sum();
  const Eigen::VectorXd zsum = st.z1.rowwise().sum();
  for (Eigen::Index s = 0; s < st.z1.rows(); ++s) {
    const double prec = c * (q + s0 * st.lambda2inv1[s] / g);
    const double v = 1.0 / prec;
    require_positive(v, "theta variance", s);
    st.sig2_theta[s] = v;
    st.mu_theta[s] = c * v * (zsum[s] - zeta_sum);
  }
}

void update_global_scales(VariationalState& st, const ModelSpec& spec) {
  const double c = st.c;
  const double p = static_cast<double>(st.mu_theta.size());
  const double g = global_scale(spec);
  double quad = 0.0;
  for (Eigen::Index s = 0; s < st.mu_theta.size(); ++s)
    quad += st.lambda2inv1[s] * (st.mu_theta[s] * st.mu_theta[s] + st.sig2_theta[s]);
  st.nu_sigma0 = 0.5 * c * (p - 1.0) + 1.0;
  st.rho_sigma0 = c * (st.xi_inv1() + 0.5 * quad / g);
  require_positive(st.rho_sigma0, "sigma_0 rate", 0);
  st.nu_xi = 1.0;
  st.rho_xi = c * (1.0 + st.sigma0_inv1());
}

double lambda_moment(double c, double L) {
  if (!(c > 0.0 && c <= 1.0)) throw std::domain_error("inverse temperature must lie in (0,1]");
  if (!(L > 0.0)) throw std::domain_error("lambda rate must be positive");
  if (L > 1e5) {
    const double x = 1.0 / L;
    return x * (1.0 - c * x + c * (c + 2.0) * x * x);
  }
  const double s = 1.0 - c;
  const double G = sp::upper_incomplete_gamma_scaled(s, L);
  return s / L + 1.0 / (L * G) - 1.0;
}

double lambda_log_moment(double L) {
  if (!(L > 0.0)) throw std::domain_error("lambda rate must be positive");
  // u = L a: E log a = -log L + I / (L e^L E1(L)),
  // I = int_0^inf log(u) L/(L+u) e^{-u} du, split at u = L.
  const double logL = std::log(L);
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  auto head = [&](double v) { return (logL + std::log(v)) / (1.0 + v) * std::exp(-L * v); };
  const double i_head = L * ts.integrate(head, 0.0, 1.0, 1e-12);
  double i_tail = 0.0;
  if (L < 700.0) {
    auto tail = [&](double u) { return std::log(u) * L / (L + u) * std::exp(-u); };
    i_tail = es.integrate(tail, L, std::numeric_limits<double>::infinity(), 1e-12);
  }
  return -logL + (i_head + i_tail) / (L * sp::exp_e1(L));
}

void update_lambda(VariationalState& st, const ModelSpec& spec, LogMomentMode mode) {
  const double c = st.c;
  const double g = global_scale(spec);
  const double s0 = st.sigma0_inv1();
  for (Eigen::Index s = 0; s < st.mu_theta.size(); ++s) {
    double L = 0.5 * c / g * s0 * (st.mu_theta[s] * st.mu_theta[s] + st.sig2_theta[s]);
    if (!(L >= kLambdaRateFloor)) {
      L = kLambdaRateFloor;
      ++st.lambda_floor_hits;
    }
    st.lambda_rate[s] = L;
    st.lambda2inv1[s] = lambda_moment(c, L);
    require_positive(st.lambda2inv1[s], "lambda^{-2} moment", s);
    st.log_lambda2inv1[s] = (c == 1.0 && mode == LogMomentMode::kQuadrature)
                                ? lambda_log_moment(L)
                                : std::log(st.lambda2inv1[s]);
  }
}

void update_omega(VariationalState& st, const ModelSpec& spec) {
  const double c = st.c;
  const double q = static_cast<double>(st.gamma1.cols());
  const Eigen::VectorXd gsum = st.gamma1.rowwise().sum();
  for (Eigen::Index s = 0; s < gsum.size(); ++s) {
    st.omega_a[s] = c * (spec.beta_a - 1.0 + gsum[s]) + 1.0;
    st.omega_b[s] = c * (spec.beta_b - 1.0 + q - gsum[s]) + 1.0;
    require_positive(st.omega_a[s], "omega shape a", s);
    require_positive(st.omega_b[s], "omega shape b", s);
  }
}

double sweep(VariationalState& st, const Problem& prob, const ModelSpec& spec, int threads,
             LogMomentMode mode) {
  const double dg = update_responses(st, prob, spec, threads);
  if (spec.propensity == PropensityPrior::kGlobalLocal) {
    update_zeta(st, spec);
    update_theta(st, spec);
    update_global_scales(st, spec);
    update_lambda(st, spec, mode);
  } else {
    update_omega(st, spec);
  }
  update_sigma(st, spec);
  return dg;
}

}  // namespace hotspot::vb
