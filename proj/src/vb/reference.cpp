#include "hotspot/vb/reference.hpp"

#include <cmath>

#include "hotspot/special_fn.hpp"

namespace hotspot::vb::reference {

namespace sp = hotspot::special;

void update_response(VariationalState& st, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                     const ModelSpec& spec, Eigen::Index t) {
  const Eigen::Index n = X.rows(), p = X.cols();
  const double c = st.c;
  const double tau = st.eta_tau[t] / st.kappa_tau[t];
  const double sinv = st.nu_sigma / st.rho_sigma;
  const double elog_sigma = sp::digamma(st.nu_sigma) - std::log(st.rho_sigma);
  const double elog_tau = sp::digamma(st.eta_tau[t]) - std::log(st.kappa_tau[t]);

  for (Eigen::Index s = 0; s < p; ++s) {
    double xr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double fit = 0.0;
      for (Eigen::Index j = 0; j < p; ++j)
        if (j != s) fit += st.gamma1(j, t) * st.mu_beta(j, t) * X(i, j);
      xr += X(i, s) * (Y(i, t) - fit);
    }
    double xsq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) xsq += X(i, s) * X(i, s);
    const double sig2 = 1.0 / (c * tau * (xsq + sinv));
    const double mu = c * sig2 * tau * xr;

    double prior_logit;
    double alpha = 0.0;
    if (spec.propensity == PropensityPrior::kFixedBeta) {
      prior_logit = sp::digamma(st.omega_a[s]) - sp::digamma(st.omega_b[s]);
    } else {
      alpha = st.mu_theta[s] + st.mu_zeta[t];
      prior_logit = std::log(sp::std_normal_cdf(alpha)) - std::log(1.0 - sp::std_normal_cdf(alpha));
    }
    const double expo = -c * (0.5 * elog_sigma + 0.5 * elog_tau + 0.5 * mu * mu / sig2 +
                              std::log(std::sqrt(sig2)) + prior_logit);
    const double g = 1.0 / (1.0 + std::exp(expo));
    st.sig2_beta(s, t) = sig2;
    st.mu_beta(s, t) = mu;
    st.gamma1(s, t) = g;
    if (spec.propensity == PropensityPrior::kGlobalLocal) {
      const double u = std::sqrt(c) * alpha;
      const double phi = sp::std_normal_pdf(u);
      const double Phi = sp::std_normal_cdf(u);
      const double m1 = phi / Phi;
      const double m0 = -phi / (1.0 - Phi);
      st.z_loc(s, t) = alpha;
      st.z1(s, t) = g * (alpha + m1 / std::sqrt(c)) + (1.0 - g) * (alpha + m0 / std::sqrt(c));
    }
  }

  // tau: expanded quadratic with the pairwise cross terms.
  double yy = 0.0, ym = 0.0, cross = 0.0, diag = 0.0, sum_g = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) yy += Y(i, t) * Y(i, t);
  for (Eigen::Index s = 0; s < p; ++s) {
    const double ms = st.mu_beta(s, t) * st.gamma1(s, t);
    double xy = 0.0, xsq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      xy += X(i, s) * Y(i, t);
      xsq += X(i, s) * X(i, s);
    }
    ym += ms * xy;
    for (Eigen::Index j = s + 1; j < p; ++j) {
      double xx = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) xx += X(i, s) * X(i, j);
      cross += ms * st.mu_beta(j, t) * st.gamma1(j, t) * xx;
    }
    const double g = st.gamma1(s, t);
    diag += 0.5 * g * (st.sig2_beta(s, t) + st.mu_beta(s, t) * st.mu_beta(s, t)) * (xsq + sinv);
    sum_g += g;
  }
  st.eta_tau[t] = c * (spec.eta[t] + 0.5 * static_cast<double>(n) + 0.5 * sum_g) - c + 1.0;
  st.kappa_tau[t] = c * (spec.kappa[t] + 0.5 * yy - ym + cross + diag);

  Eigen::VectorXd r = Y.col(t);
  for (Eigen::Index s = 0; s < p; ++s) r -= st.gamma1(s, t) * st.mu_beta(s, t) * X.col(s);
  st.resid.col(t) = r;
}

void update_responses(VariationalState& st, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const ModelSpec& spec) {
  for (Eigen::Index t = 0; t < Y.cols(); ++t) update_response(st, X, Y, spec, t);
}

}  // namespace hotspot::vb::reference
