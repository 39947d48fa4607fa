#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hotspot/dataset.hpp"
#include "hotspot/model_config.hpp"
#include "hotspot/vb/schedule.hpp"
#include "hotspot/vb/state.hpp"

namespace hotspot::vb {

struct FitOptions {
  double elbo_rel_tol = 1e-6;
  std::size_t max_iters_cold = 1000;
  std::size_t restarts = 1;
  unsigned long long rng_seed = 0;
  AnnealingSchedule schedule = make_schedule(1.0, 1);
  /// Average ppi / effects / propensities over restarts instead of keeping
  /// the best-ELBO run.
  bool average_restarts = false;
  int threads = 0;  // 0: OpenMP default
  double gamma_init = -1.0;
  LogMomentMode log_moment = LogMomentMode::kQuadrature;

  void validate() const;
};

struct TraceRow {
  std::size_t iteration;
  double temperature;
  double elbo;  // NaN during heated sweeps
  double max_delta_gamma;
};

struct PosteriorSummary {
  Eigen::MatrixXd ppi;        // E_q(gamma_st)
  Eigen::MatrixXd beta_mean;  // E_q(beta_st)
  /// E_q(theta_s) for the global-local model, E_q(omega_s) for fixed Beta.
  Eigen::VectorXd propensity;
  std::vector<std::size_t> hotspot_sizes;  // #{t : ppi_st >= 0.5}
  double elbo = 0.0;
  bool converged = false;
};

struct RestartRecord {
  double final_elbo;
  bool converged;
  std::size_t cold_iterations;
  bool monotone;  // no cold-phase ELBO drop beyond 1e-8 relative
};

struct FitResult {
  PosteriorSummary summary;
  std::vector<TraceRow> trace;  // of the selected restart
  std::vector<RestartRecord> restarts;
  std::size_t best_restart = 0;
  VariationalState state;  // of the selected restart
};

/// Anneals then iterates at T = 1 from the given state. Appends to trace.
RestartRecord run_from_state(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                             const FitOptions& opts, std::vector<TraceRow>& trace);

/// Full fit on centered data. Throws DataError on dimension mismatch.
FitResult fit(const DataSet& data, const ModelSpec& spec, const FitOptions& opts);

PosteriorSummary summarize(const VariationalState& st, const ModelSpec& spec);

}  // namespace hotspot::vb
