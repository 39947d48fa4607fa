#include "hotspot/vb/fit.hpp"

#include <cmath>
#include <limits>

#include "hotspot/errors.hpp"
#include "hotspot/vb/elbo.hpp"
#include "hotspot/vb/updates.hpp"

namespace hotspot::vb {

void FitOptions::validate() const {
  if (!(elbo_rel_tol > 0.0)) throw ConfigError("elbo_rel_tol must be positive");
  if (max_iters_cold < 1) throw ConfigError("max_iters_cold must be >= 1");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (schedule.temperatures.empty() || schedule.temperatures.back() != 1.0)
    throw ConfigError("annealing schedule must end at temperature 1");
  if (schedule.sweeps_per_temp < 1) throw ConfigError("sweeps_per_temp must be >= 1");
}

PosteriorSummary summarize(const VariationalState& st, const ModelSpec& spec) {
  PosteriorSummary out;
  out.ppi = st.gamma1;
  out.beta_mean = st.gamma1.cwiseProduct(st.mu_beta);
  if (spec.propensity == PropensityPrior::kFixedBeta)
    out.propensity = st.omega_a.cwiseQuotient(st.omega_a + st.omega_b);
  else
    out.propensity = st.mu_theta;
  out.hotspot_sizes.assign(static_cast<std::size_t>(st.gamma1.rows()), 0);
  for (Eigen::Index s = 0; s < st.gamma1.rows(); ++s)
    out.hotspot_sizes[static_cast<std::size_t>(s)] =
        static_cast<std::size_t>((st.gamma1.row(s).array() >= 0.5).count());
  return out;
}

RestartRecord run_from_state(VariationalState& st, const Problem& prob, const ModelSpec& spec,
                             const FitOptions& opts, std::vector<TraceRow>& trace) {
  std::size_t iter = trace.size();
  const auto& temps = opts.schedule.temperatures;
  for (std::size_t j = 0; j + 1 < temps.size(); ++j) {
    st.c = 1.0 / temps[j];
    for (std::size_t k = 0; k < opts.schedule.sweeps_per_temp; ++k) {
      const double dg = sweep(st, prob, spec, opts.threads, opts.log_moment);
      trace.push_back({++iter, temps[j], std::numeric_limits<double>::quiet_NaN(), dg});
    }
  }
  st.c = 1.0;
  RestartRecord rec{std::numeric_limits<double>::quiet_NaN(), false, 0, true};
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < opts.max_iters_cold; ++k) {
    const double dg = sweep(st, prob, spec, opts.threads, opts.log_moment);
    const double elbo = compute_elbo(st, prob, spec);
    trace.push_back({++iter, 1.0, elbo, dg});
    rec.cold_iterations = k + 1;
    rec.final_elbo = elbo;
    if (k > 0) {
      const double delta = elbo - prev;
      if (delta < -1e-8 * std::fabs(elbo)) rec.monotone = false;
      if (std::fabs(delta) < opts.elbo_rel_tol * std::fabs(elbo)) {
        rec.converged = true;
        break;
      }
    }
    prev = elbo;
  }
  return rec;
}

FitResult fit(const DataSet& data, const ModelSpec& spec, const FitOptions& opts) {
  data.validate();
  spec.validate();
  opts.validate();
  const Problem prob(data.X, data.Y);

  FitResult best;
  Eigen::MatrixXd ppi_sum, beta_sum;
  Eigen::VectorXd prop_sum;
  double best_elbo = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    InitOptions init;
    init.gamma_init = opts.gamma_init;
    init.restart = r;
    init.seed = opts.rng_seed;
    init.log_moment = opts.log_moment;
    VariationalState st = initial_state(prob, spec, init);
    std::vector<TraceRow> trace;
    const RestartRecord rec = run_from_state(st, prob, spec, opts, trace);
    best.restarts.push_back(rec);
    if (opts.average_restarts) {
      const PosteriorSummary s = summarize(st, spec);
      if (r == 0) {
        ppi_sum = s.ppi;
        beta_sum = s.beta_mean;
        prop_sum = s.propensity;
      } else {
        ppi_sum += s.ppi;
        beta_sum += s.beta_mean;
        prop_sum += s.propensity;
      }
    }
    if (r == 0 || rec.final_elbo > best_elbo) {
      best_elbo = rec.final_elbo;
      best.best_restart = r;
      best.trace = std::move(trace);
      best.state = std::move(st);
    }
  }
  best.summary = summarize(best.state, spec);
  if (opts.average_restarts && opts.restarts > 1) {
    const double k = static_cast<double>(opts.restarts);
    best.summary.ppi = ppi_sum / k;
    best.summary.beta_mean = beta_sum / k;
    best.summary.propensity = prop_sum / k;
    for (Eigen::Index s = 0; s < ppi_sum.rows(); ++s)
      best.summary.hotspot_sizes[static_cast<std::size_t>(s)] =
          static_cast<std::size_t>((best.summary.ppi.row(s).array() >= 0.5).count());
  }
  best.summary.elbo = best.restarts[best.best_restart].final_elbo;
  best.summary.converged = best.restarts[best.best_restart].converged;
  return best;
}

}  // namespace hotspot::vb
