#pragma once

#include <cstddef>
#include <vector>

namespace hotspot {

/// Beta(a, b) prior on a predictor's association probability, parametrised by
/// its mean and variance. Construction rejects infeasible moments.
class BetaPropensitySpec {
 public:
  BetaPropensitySpec(double mu_omega, double sigma_omega_sq);

  double mu_omega() const { return mu_; }
  double sigma_omega_sq() const { return var_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double mu_;
  double var_;
  double a_;
  double b_;
};

/// Prior expectation and variance of the number of predictors associated
/// with each response.
struct SparsityTarget {
  double e_p;
  double v_p;
};

/// Hyperparameters of the response-specific probit offset zeta_t ~ N(n0, t0_sq).
struct ZetaPrior {
  double n0 = 0.0;
  double t0_sq = 0.0;
};

enum class PropensityPrior {
  kGlobalLocal,  // probit second stage with horseshoe hotspot propensities
  kFixedBeta,    // omega_s ~ Beta(a, b) with fixed hyperparameters
};

struct ModelSpec {
  std::size_t p = 0;
  std::size_t q = 0;
  double n0 = 0.0;
  double t0_sq = 0.0;
  std::vector<double> eta;    // per-response Gamma shape of tau_t
  std::vector<double> kappa;  // per-response Gamma rate of tau_t
  double nu = 1e-2;           // Gamma shape of sigma^{-2}
  double rho = 1e-2;          // Gamma rate of sigma^{-2}
  /// Scale applied to sigma_0's half-Cauchy prior variance; 1/q unless
  /// deliberately overridden.
  double global_scale_sq_prior = 0.0;
  PropensityPrior propensity = PropensityPrior::kGlobalLocal;
  double beta_a = 1.0;  // used by kFixedBeta only
  double beta_b = 1.0;

  static ModelSpec global_local(std::size_t p, std::size_t q, ZetaPrior zeta,
                                double vague = 1e-2);
  static ModelSpec fixed_beta(std::size_t p, std::size_t q,
                              const BetaPropensitySpec& beta, double vague = 1e-2);

  /// Throws ConfigError when any invariant is violated.
  void validate() const;
};

/// POR(q_s - 1 : q_s) = (b + q - q_s) / (a + q_s - 1).
double prior_odds(double a, double b, std::size_t q, std::size_t q_s);

/// POR(0 : 1) / POR(q_s - 1 : q_s).
double multiplicity_penalty_ratio(double a, double b, std::size_t q, std::size_t q_s);

struct CalibrationResult {
  ZetaPrior prior;
  bool degenerate = false;     // t0_sq solved to exactly 0
  double mean_residual = 0.0;  // E(p_gamma) - e_p, in units of e_p
  double var_residual = 0.0;   // Var(p_gamma) - v_p, in units of v_p
};

/// Prior mean and variance of the number of predictors per response under
/// zeta ~ N(n0, t0_sq) with no predictor modulation.
struct PredictorCountMoments {
  double mean;
  double variance;
};
PredictorCountMoments predictor_count_moments(double n0, double t0_sq, std::size_t p);

/// Solve (n0, t0_sq) so that the predictor-count moments match the target.
/// Throws InfeasibleError reporting the attainable variance range.
CalibrationResult calibrate_zeta_prior(const SparsityTarget& target, std::size_t p);

/// Prior density of the hotspot shrinkage factor kappa in (0,1).
double shrinkage_factor_density(double kappa, double alpha);

/// alpha(sigma_0) = q sigma_0^2 / (1 + t0_sq).
double alpha_of_sigma0(double sigma0_sq, std::size_t q, double t0_sq);

/// E(theta_s | z_s, sigma_0, lambda_s) = (1 - kappa) * zbar'.
double posterior_mean_theta_given_z(double z_bar_centered, double kappa);

/// |E Phi(theta + zeta) - E Phi(zeta)| and the same for Phi^2, under the
/// horseshoe propensity with sigma_0 ~ C+(0, q^{-1/2}); 2-D quadrature.
struct FiniteQError {
  double first_moment;
  double second_moment;
};
FiniteQError finite_q_approximation_error(double n0, double t0_sq, double q);

}  // namespace hotspot

namespace hotspot {

/// Monte Carlo estimates of the predictor-count mean and variance from
/// zeta ~ N(n0, t0_sq), with standard errors.
struct MonteCarloMoments {
  double mean;
  double mean_se;
  double variance;
  double variance_se;
  std::size_t draws;
};
MonteCarloMoments monte_carlo_count_moments(double n0, double t0_sq, std::size_t p,
                                            std::size_t draws, unsigned long long seed);

}  // namespace hotspot
