#pragma once

#include <Eigen/Dense>

#include "hotspot/model_config.hpp"
#include "hotspot/vb/state.hpp"

namespace hotspot::vb {

/// Heated block updates. Each uses st.c and leaves the residual cache
/// consistent. Throw NumericalError on non-positive variances or rates.

/// Sequential pass over predictors s = 0..p-1 for response t. Returns the
/// largest absolute change in gamma1 over the column.
double update_beta_gamma_z(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                           Eigen::Index t);

void update_tau(VariationalState& st, const Problem& prob, const ModelSpec& spec, Eigen::Index t);

/// beta/gamma/z followed by tau for every response, parallel over responses
/// when threads != 1. Returns max |delta gamma1|.
double update_responses(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                        int threads = 0);

void update_sigma(VariationalState& st, const ModelSpec& spec);
void update_zeta(VariationalState& st, const ModelSpec& spec);
void update_theta(VariationalState& st, const ModelSpec& spec);
/// sigma_0^{-2} then xi^{-1}.
void update_global_scales(VariationalState& st, const ModelSpec& spec);
void update_lambda(VariationalState& st, const ModelSpec& spec,
                   LogMomentMode mode = LogMomentMode::kQuadrature);
/// Fixed-Beta model: q(omega_s) = Beta(omega_a, omega_b).
void update_omega(VariationalState& st, const ModelSpec& spec);

/// One full block sweep in the engine's fixed order. Returns max |delta gamma1|.
double sweep(VariationalState& st, const Problem& prob, const ModelSpec& spec, int threads = 0,
             LogMomentMode mode = LogMomentMode::kQuadrature);

/// (lambda^{-2})^{(1)} for inverse temperature c and rate L.
double lambda_moment(double c, double L);

/// E log(lambda^{-2}) under q(a) proportional to (1+a)^{-1} e^{-L a}.
double lambda_log_moment(double L);

/// z^{(1)} = alpha + c^{-1/2}[g M(c^{1/2} alpha, 1) + (1-g) M(c^{1/2} alpha, 0)].
double z_first_moment(double alpha, double gamma, double c);

}  // namespace hotspot::vb
