#pragma once

#include "hotspot/model_config.hpp"
#include "hotspot/vb/state.hpp"

namespace hotspot::vb {

/// Per-block contributions to the evidence lower bound at T = 1. Terms that do
/// not apply to the chosen propensity prior are zero.
struct ElboTerms {
  double y = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double zeta = 0.0;
  double theta = 0.0;
  double sigma0 = 0.0;
  double xi = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double omega = 0.0;

  double total() const {
    return y + beta + gamma + zeta + theta + sigma0 + xi + lambda + sigma + tau + omega;
  }
};

/// Evaluates every term from the state alone (residuals are recomputed, the
/// cache is not trusted). Throws NumericalError naming the first non-finite term.
ElboTerms elbo_terms(const VariationalState& st, const Problem& prob, const ModelSpec& spec);

double compute_elbo(const VariationalState& st, const Problem& prob, const ModelSpec& spec);

/// -g log g - (1-g) log(1-g) with 0 log 0 = 0.
double bernoulli_entropy(double g);

}  // namespace hotspot::vb
