#include "hotspot/vb/state.hpp"

#include <cmath>
#include <random>

#include "hotspot/errors.hpp"
#include "hotspot/special_fn.hpp"
#include "hotspot/vb/updates.hpp"

namespace hotspot::vb {

Problem::Problem(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) : X_(&X), Y_(&Y) {
  if (X.rows() != Y.rows()) throw DataError("predictor and response sample counts differ");
  x_sq_ = X.colwise().squaredNorm().transpose();
  y_sq_ = Y.colwise().squaredNorm().transpose();
  for (Eigen::Index s = 0; s < x_sq_.size(); ++s)
    if (!(x_sq_[s] > 0.0)) throw DataError("predictor column " + std::to_string(s) +
                                           " has zero norm; drop it before fitting");
}

double gamma_log_mean(double shape, double rate) {
  return special::digamma(shape) - std::log(rate);
}

double prior_inclusion_probability(const ModelSpec& spec) {
  if (spec.propensity == PropensityPrior::kFixedBeta)
    return spec.beta_a / (spec.beta_a + spec.beta_b);
  return special::std_normal_cdf(spec.n0 / std::sqrt(1.0 + spec.t0_sq));
}

void refresh_residuals(VariationalState& st, const Problem& prob) {
  st.resid = prob.Y() - prob.X() * st.gamma1.cwiseProduct(st.mu_beta);
}

VariationalState initial_state(const Problem& prob, const ModelSpec& spec,
                               const InitOptions& opts) {
  spec.validate();
  const Eigen::Index n = prob.n(), p = prob.p(), q = prob.q();
  if (static_cast<std::size_t>(p) != spec.p || static_cast<std::size_t>(q) != spec.q)
    throw DataError("model dimensions (p=" + std::to_string(spec.p) + ", q=" +
                    std::to_string(spec.q) + ") do not match the data (p=" + std::to_string(p) +
                    ", q=" + std::to_string(q) + ")");

  VariationalState st;
  st.c = 1.0;
  const double g0 = opts.gamma_init > 0.0 ? opts.gamma_init : prior_inclusion_probability(spec);
  st.gamma1 = Eigen::MatrixXd::Constant(p, q, g0);
  st.mu_beta = Eigen::MatrixXd::Zero(p, q);

  st.eta_tau.resize(q);
  st.kappa_tau.resize(q);
  for (Eigen::Index t = 0; t < q; ++t) {
    st.eta_tau[t] = spec.eta[t] + 0.5 * static_cast<double>(n);
    st.kappa_tau[t] = spec.kappa[t] + 0.5 * prob.y_sq()[t];
  }
  st.nu_sigma = 1.0;
  st.rho_sigma = 1.0;
  st.nu_sigma0 = 1.0;
  st.rho_sigma0 = 1.0;
  st.nu_xi = 1.0;
  st.rho_xi = 1.0 + st.sigma0_inv1();

  st.mu_zeta = Eigen::VectorXd::Constant(q, spec.n0 / std::sqrt(1.0 + spec.t0_sq));
  st.sig2_zeta = Eigen::VectorXd::Constant(
      q, spec.t0_sq > 0.0 ? 1.0 / (static_cast<double>(p) + 1.0 / spec.t0_sq) : 0.0);
  const double g = spec.global_scale_sq_prior > 0.0 ? spec.global_scale_sq_prior
                                                    : 1.0 / static_cast<double>(q);
  st.mu_theta = Eigen::VectorXd::Zero(p);
  st.sig2_theta = Eigen::VectorXd::Constant(p, g);

  if (opts.restart > 0) {
    std::seed_seq seq{static_cast<unsigned long long>(opts.seed),
                      static_cast<unsigned long long>(opts.restart), 0x5eedULL};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> jit(0.0, opts.jitter);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index s = 0; s < p; ++s) st.mu_theta[s] += jit(rng);
    if (spec.t0_sq > 0.0)
      for (Eigen::Index t = 0; t < q; ++t) st.mu_zeta[t] += jit(rng);
    // Random active set started at the marginal least-squares effects.
    const Eigen::MatrixXd xty = prob.X().transpose() * prob.Y();
    for (Eigen::Index t = 0; t < q; ++t)
      for (Eigen::Index s = 0; s < p; ++s)
        if (unif(rng) < g0) {
          st.gamma1(s, t) = 0.5 + 0.5 * unif(rng);
          st.mu_beta(s, t) = xty(s, t) / prob.x_sq()[s];
        }
  }

  st.sig2_beta.resize(p, q);
  for (Eigen::Index t = 0; t < q; ++t)
    for (Eigen::Index s = 0; s < p; ++s)
      st.sig2_beta(s, t) = 1.0 / (st.tau1(t) * (prob.x_sq()[s] + st.sigma_inv1()));

  st.z_loc.resize(p, q);
  st.z1.resize(p, q);
  for (Eigen::Index t = 0; t < q; ++t)
    for (Eigen::Index s = 0; s < p; ++s) {
      const double a = st.alpha(s, t);
      st.z_loc(s, t) = a;
      st.z1(s, t) = z_first_moment(a, st.gamma1(s, t), 1.0);
    }

  st.lambda2inv1 = Eigen::VectorXd::Ones(p);
  st.log_lambda2inv1 = Eigen::VectorXd::Zero(p);
  st.lambda_rate = Eigen::VectorXd::Ones(p);
  st.omega_a = Eigen::VectorXd::Constant(p, spec.beta_a);
  st.omega_b = Eigen::VectorXd::Constant(p, spec.beta_b);
  if (spec.propensity == PropensityPrior::kGlobalLocal) update_lambda(st, spec, opts.log_moment);

  refresh_residuals(st, prob);
  return st;
}

}  // namespace hotspot::vb
