#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "hotspot/model_config.hpp"

namespace hotspot::vb {

/// Precomputed views of a centered dataset shared by all updates.
class Problem {
 public:
  Problem(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

  const Eigen::MatrixXd& X() const { return *X_; }
  const Eigen::MatrixXd& Y() const { return *Y_; }
  const Eigen::VectorXd& x_sq() const { return x_sq_; }  // ||X_s||^2
  const Eigen::VectorXd& y_sq() const { return y_sq_; }  // ||y_t||^2
  Eigen::Index n() const { return X_->rows(); }
  Eigen::Index p() const { return X_->cols(); }
  Eigen::Index q() const { return Y_->cols(); }

 private:
  const Eigen::MatrixXd* X_;
  const Eigen::MatrixXd* Y_;
  Eigen::VectorXd x_sq_;
  Eigen::VectorXd y_sq_;
};

/// Every variational parameter of the reparametrised model, plus the inverse
/// temperature c and the residual cache y_t - X (gamma1 o mu_beta)_t.
struct VariationalState {
  // p x q
  Eigen::MatrixXd gamma1;
  Eigen::MatrixXd mu_beta;
  Eigen::MatrixXd sig2_beta;
  Eigen::MatrixXd z1;
  Eigen::MatrixXd z_loc;  // alpha at which q(z | gamma) was last formed

  // length q
  Eigen::VectorXd mu_zeta;
  Eigen::VectorXd sig2_zeta;
  Eigen::VectorXd eta_tau;
  Eigen::VectorXd kappa_tau;

  // length p
  Eigen::VectorXd mu_theta;
  Eigen::VectorXd sig2_theta;
  Eigen::VectorXd lambda2inv1;
  Eigen::VectorXd log_lambda2inv1;
  Eigen::VectorXd lambda_rate;  // L_s defining q(lambda_s^{-2})
  Eigen::VectorXd omega_a;      // fixed-Beta model only
  Eigen::VectorXd omega_b;

  double nu_sigma = 1.0;
  double rho_sigma = 1.0;
  double nu_sigma0 = 1.0;
  double rho_sigma0 = 1.0;
  double nu_xi = 1.0;
  double rho_xi = 2.0;

  double c = 1.0;
  std::size_t lambda_floor_hits = 0;

  Eigen::MatrixXd resid;  // n x q

  double tau1(Eigen::Index t) const { return eta_tau[t] / kappa_tau[t]; }
  double sigma_inv1() const { return nu_sigma / rho_sigma; }
  double sigma0_inv1() const { return nu_sigma0 / rho_sigma0; }
  double xi_inv1() const { return nu_xi / rho_xi; }
  double alpha(Eigen::Index s, Eigen::Index t) const { return mu_theta[s] + mu_zeta[t]; }
};

/// E(log X) for X ~ Gamma(shape, rate).
double gamma_log_mean(double shape, double rate);

enum class LogMomentMode { kQuadrature, kPlugIn };

struct InitOptions {
  double gamma_init = -1.0;  // <= 0: prior inclusion probability implied by spec
  std::size_t restart = 0;   // restarts > 0 are randomly perturbed
  unsigned long long seed = 0;
  double jitter = 0.1;
  LogMomentMode log_moment = LogMomentMode::kQuadrature;
};

/// Prior inclusion probability implied by the spec.
double prior_inclusion_probability(const ModelSpec& spec);

VariationalState initial_state(const Problem& prob, const ModelSpec& spec,
                               const InitOptions& opts = {});

/// Recomputes the residual cache from gamma1 and mu_beta.
void refresh_residuals(VariationalState& st, const Problem& prob);

}  // namespace hotspot::vb
