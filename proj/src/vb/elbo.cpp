#include "hotspot/vb/elbo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hotspot/errors.hpp"
#include "hotspot/special_fn.hpp"

namespace hotspot::vb {

namespace sp = hotspot::special;

namespace {

constexpr double kLogPi = 1.14472988584940017414342735135305871;
constexpr double kLog2Pi = 1.83787706640934548356065947281123527;

void check(double v, const char* term) {
  if (!std::isfinite(v)) throw NumericalError(std::string("ELBO term ") + term + " is not finite");
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double bernoulli_entropy(double g) { return -xlogx(g) - xlogx(1.0 - g); }

ElboTerms elbo_terms(const VariationalState& st, const Problem& prob, const ModelSpec& spec) {
  const Eigen::Index n = prob.n(), p = prob.p(), q = prob.q();
  const bool beta_prior = spec.propensity == PropensityPrior::kFixedBeta;
  ElboTerms L;

  const Eigen::MatrixXd m = st.gamma1.cwiseProduct(st.mu_beta);
  const Eigen::MatrixXd resid = prob.Y() - prob.X() * m;
  const double sinv = st.sigma_inv1();
  const double elog_sigma = gamma_log_mean(st.nu_sigma, st.rho_sigma);
  Eigen::VectorXd elog_w, elog_1w;
  if (beta_prior) {
    elog_w.resize(p);
    elog_1w.resize(p);
    for (Eigen::Index s = 0; s < p; ++s) {
      const double dab = sp::digamma(st.omega_a[s] + st.omega_b[s]);
      elog_w[s] = sp::digamma(st.omega_a[s]) - dab;
      elog_1w[s] = sp::digamma(st.omega_b[s]) - dab;
    }
  }

  for (Eigen::Index t = 0; t < q; ++t) {
    const double tau = st.tau1(t);
    const double elog_tau = gamma_log_mean(st.eta_tau[t], st.kappa_tau[t]);
    double expected_sq = resid.col(t).squaredNorm();
    double lb = 0.0, lg = 0.0;
    for (Eigen::Index s = 0; s < p; ++s) {
      const double g = st.gamma1(s, t);
      const double mu = st.mu_beta(s, t);
      const double v = st.sig2_beta(s, t);
      const double e2 = g * (mu * mu + v);
      expected_sq += (e2 - m(s, t) * m(s, t)) * prob.x_sq()[s];
      if (g > 0.0) {
        lb += 0.5 * g * (elog_sigma + elog_tau - (mu * mu + v) * sinv * tau) +
              0.5 * g * (std::log(v) + 1.0);
      }
      if (beta_prior) {
        lg += g * elog_w[s] + (1.0 - g) * elog_1w[s];
      } else {
        const double at = st.z_loc(s, t);
        const double a = st.alpha(s, t);
        const double d = a - at;
        const auto [lp, lm] = sp::log_std_normal_cdf_pair(at);
        double lphi = 0.0;
        if (g > 0.0) lphi += g * lp;
        if (g < 1.0) lphi += (1.0 - g) * lm;
        lg += lphi - 0.5 * d * d + (st.z1(s, t) - at) * d - 0.5 * st.sig2_theta[s] -
              0.5 * st.sig2_zeta[t];
      }
      lg += bernoulli_entropy(g);
    }
    L.y += -0.5 * static_cast<double>(n) * kLog2Pi + 0.5 * static_cast<double>(n) * elog_tau -
           0.5 * tau * expected_sq;
    L.beta += lb;
    L.gamma += lg;
    L.tau += (spec.eta[t] - st.eta_tau[t]) * elog_tau - (spec.kappa[t] - st.kappa_tau[t]) * tau +
             spec.eta[t] * std::log(spec.kappa[t]) - st.eta_tau[t] * std::log(st.kappa_tau[t]) -
             std::lgamma(spec.eta[t]) + std::lgamma(st.eta_tau[t]);
  }
  check(L.y, "L_y");
  check(L.beta, "L_beta");
  check(L.gamma, "L_gamma");
  check(L.tau, "L_tau");

  L.sigma = (spec.nu - st.nu_sigma) * elog_sigma - (spec.rho - st.rho_sigma) * sinv +
            spec.nu * std::log(spec.rho) - st.nu_sigma * std::log(st.rho_sigma) -
            std::lgamma(spec.nu) + std::lgamma(st.nu_sigma);
  check(L.sigma, "L_sigma");

  if (beta_prior) {
    for (Eigen::Index s = 0; s < p; ++s) {
      const double a = st.omega_a[s], b = st.omega_b[s];
      const double dab = sp::digamma(a + b);
      const double elw = sp::digamma(a) - dab;
      const double el1w = sp::digamma(b) - dab;
      L.omega += (spec.beta_a - a) * elw + (spec.beta_b - b) * el1w -
                 sp::log_beta(spec.beta_a, spec.beta_b) + sp::log_beta(a, b);
    }
    check(L.omega, "L_omega");
    return L;
  }

  if (spec.t0_sq > 0.0) {
    for (Eigen::Index t = 0; t < q; ++t) {
      const double dm = st.mu_zeta[t] - spec.n0;
      L.zeta += 0.5 * (-std::log(spec.t0_sq) + std::log(st.sig2_zeta[t]) - dm * dm / spec.t0_sq -
                       st.sig2_zeta[t] / spec.t0_sq + 1.0);
    }
  }
  check(L.zeta, "L_zeta");

  const double g = spec.global_scale_sq_prior;
  const double s0 = st.sigma0_inv1();
  const double elog_s0 = gamma_log_mean(st.nu_sigma0, st.rho_sigma0);
  const double xi = st.xi_inv1();
  const double elog_xi = gamma_log_mean(st.nu_xi, st.rho_xi);
  for (Eigen::Index s = 0; s < p; ++s) {
    const double a1 = st.lambda2inv1[s];
    const double la = st.log_lambda2inv1[s];
    const double m2 = st.mu_theta[s] * st.mu_theta[s] + st.sig2_theta[s];
    L.theta += 0.5 * (elog_s0 - std::log(g) + la + std::log(st.sig2_theta[s]) - s0 * a1 * m2 / g +
                      1.0);
    const double Ls = st.lambda_rate[s];
    L.lambda += -kLogPi - 0.5 * la + Ls * (a1 + 1.0) + std::log(sp::exp_e1(Ls)) - Ls;
  }
  check(L.theta, "L_theta");
  check(L.lambda, "L_lambda");

  L.sigma0 = (0.5 - st.nu_sigma0) * elog_s0 - (xi - st.rho_sigma0) * s0 + 0.5 * elog_xi -
             st.nu_sigma0 * std::log(st.rho_sigma0) - 0.5 * kLogPi + std::lgamma(st.nu_sigma0);
  check(L.sigma0, "L_sigma0");
  L.xi = (0.5 - st.nu_xi) * elog_xi - (1.0 - st.rho_xi) * xi - st.nu_xi * std::log(st.rho_xi) -
         0.5 * kLogPi + std::lgamma(st.nu_xi);
  check(L.xi, "L_xi");
  return L;
}

double compute_elbo(const VariationalState& st, const Problem& prob, const ModelSpec& spec) {
  return elbo_terms(st, prob, spec).total();
}

}  // namespace hotspot::vb
