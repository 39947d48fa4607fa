#include "hotspot/io/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "hotspot/errors.hpp"
#include "hotspot/eval.hpp"
#include "hotspot/io/tsv.hpp"
#include "hotspot/simqtl.hpp"
#include "hotspot/vb/fit.hpp"

namespace hotspot::io {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kPermutationStream = 5;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string prepare_output(const Config& cfg) {
  const std::string out = cfg.get("run.out");
  if (out.empty()) throw ConfigError("run.out must not be empty");
  fs::create_directories(out);
  atomic_write(join(out, "config.resolved.ini"),
               std::string("# hotspot ") + kVersion + "\n" + cfg.serialize());
  return out;
}

void write_json(const std::string& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

std::string required_path(const Config& cfg, const std::string& key) {
  const std::string v = cfg.get(key);
  if (v.empty()) throw ConfigError(key + " is required");
  return v;
}

struct FitOutcome {
  PreparedData prepared;
  ModelSpec spec;
  CalibrationResult calibration;
  bool calibrated = false;
  vb::FitResult result;
  Eigen::MatrixXd full_ppi;  // raw predictor rows; dropped predictors are 0
};

FitOutcome run_fit(const Config& cfg, const DataSet& raw) {
  FitOutcome o;
  o.prepared = prepare_dataset(raw, cfg.get_bool("data.center"));
  const DataSet& d = o.prepared.data;
  if (d.p() == 0) throw DataError("every predictor has zero variance");
  o.calibrated = cfg.get("model.n0").empty() && cfg.get("model.propensity") == "global_local";
  o.spec = model_spec_from_config(cfg, d.p(), d.q(), &o.calibration);
  o.result = vb::fit(d, o.spec, fit_options_from_config(cfg));
  o.full_ppi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(raw.p()), static_cast<Eigen::Index>(raw.q()));
  for (std::size_t k = 0; k < o.prepared.kept_predictors.size(); ++k)
    o.full_ppi.row(static_cast<Eigen::Index>(o.prepared.kept_predictors[k])) =
        o.result.summary.ppi.row(static_cast<Eigen::Index>(k));
  return o;
}

void write_fit_outputs(const Config& cfg, const DataSet& raw, const FitOutcome& o,
                       const std::string& out, double wall_seconds) {
  const auto& s = o.result.summary;
  const auto p = static_cast<Eigen::Index>(raw.p()), q = static_cast<Eigen::Index>(raw.q());
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(p, q);
  std::vector<double> propensity(raw.p(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < o.prepared.kept_predictors.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(o.prepared.kept_predictors[k]);
    beta.row(r) = s.beta_mean.row(static_cast<Eigen::Index>(k));
    propensity[static_cast<std::size_t>(r)] = s.propensity[static_cast<Eigen::Index>(k)];
  }
  const auto calls = eval::call_hotspots(o.full_ppi, cfg.get_double("eval.threshold"));

  write_matrix_tsv(join(out, "ppi.tsv"), {"predictor", raw.predictor_ids, raw.response_ids, o.full_ppi});
  write_matrix_tsv(join(out, "beta_mean.tsv"), {"predictor", raw.predictor_ids, raw.response_ids, beta});
  const bool fixed = o.spec.propensity == PropensityPrior::kFixedBeta;
  write_vector_tsv(join(out, "theta_mean.tsv"), "predictor", fixed ? "omega_mean" : "theta_mean",
                   raw.predictor_ids, propensity);
  write_vector_tsv(join(out, "hotspot_sizes.tsv"), "predictor", "size", raw.predictor_ids,
                   std::vector<double>(calls.sizes.begin(), calls.sizes.end()));

  std::string trace = "iteration\ttemperature\telbo\tmax_delta_gamma\n";
  for (const auto& r : o.result.trace)
    trace += std::to_string(r.iteration) + '\t' + format_double(r.temperature) + '\t' +
             format_double(r.elbo) + '\t' + format_double(r.max_delta_gamma) + '\n';
  atomic_write(join(out, "elbo_trace.tsv"), trace);

  const auto opts = fit_options_from_config(cfg);
  json meta;
  meta["version"] = kVersion;
  meta["command"] = "fit";
  meta["seed"] = opts.rng_seed;
  meta["threads"] = opts.threads;
  meta["n"] = raw.n();
  meta["p"] = raw.p();
  meta["q"] = raw.q();
  meta["schedule"] = {{"t_hot", opts.schedule.t_hot},
                      {"n_temps", opts.schedule.n_temps},
                      {"sweeps_per_temp", opts.schedule.sweeps_per_temp},
                      {"temperatures", opts.schedule.temperatures}};
  meta["converged"] = s.converged;
  meta["final_elbo"] = s.elbo;
  meta["best_restart"] = o.result.best_restart;
  json restarts = json::array();
  for (const auto& r : o.result.restarts)
    restarts.push_back({{"final_elbo", r.final_elbo},
                        {"converged", r.converged},
                        {"cold_iterations", r.cold_iterations},
                        {"monotone", r.monotone}});
  meta["restarts"] = restarts;
  meta["model"] = {{"propensity", fixed ? "fixed_beta" : "global_local"},
                   {"n0", o.spec.n0},
                   {"t0_sq", o.spec.t0_sq},
                   {"beta_a", o.spec.beta_a},
                   {"beta_b", o.spec.beta_b},
                   {"calibrated", o.calibrated}};
  std::vector<std::string> dropped;
  for (auto i : o.prepared.dropped_predictors) dropped.push_back(raw.predictor_ids[i]);
  meta["dropped_predictors"] = dropped;
  meta["lambda_floor_hits"] = o.result.state.lambda_floor_hits;
  meta["wall_time_seconds"] = wall_seconds;
  write_json(join(out, "run_meta.json"), meta);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> flatten(const Eigen::MatrixXd& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

json roc_json_and_tsv(const std::vector<eval::RocPoint>& roc, const std::string& path) {
  std::string tsv = "fpr\ttpr\n";
  for (const auto& pt : roc) tsv += format_double(pt.fpr) + '\t' + format_double(pt.tpr) + '\n';
  atomic_write(path, tsv);
  return json(roc.size());
}

}  // namespace

DataSet load_dataset(const std::string& gpath, const std::string& ypath) {
  const auto X = read_matrix_tsv(gpath);
  const auto Y = read_matrix_tsv(ypath);
  if (X.row_ids.size() != Y.row_ids.size())
    throw DataError("sample count mismatch: " + gpath + " has " + std::to_string(X.row_ids.size()) +
                    " samples, " + ypath + " has " + std::to_string(Y.row_ids.size()));
  if (X.row_ids != Y.row_ids)
    throw DataError("sample identifiers differ between " + gpath + " and " + ypath);
  DataSet d;
  d.X = X.values;
  d.Y = Y.values;
  d.sample_ids = X.row_ids;
  d.predictor_ids = X.col_ids;
  d.response_ids = Y.col_ids;
  d.validate();
  return d;
}

void cmd_fit(const Config& user_cfg, std::ostream& report) {
  const Config cfg = user_cfg.resolved();
  const auto t0 = std::chrono::steady_clock::now();
  const DataSet raw = load_dataset(required_path(cfg, "data.genotypes"), required_path(cfg, "data.responses"));
  fit_options_from_config(cfg);
  const std::string out = prepare_output(cfg);
  const FitOutcome o = run_fit(cfg, raw);
  write_fit_outputs(cfg, raw, o, out, seconds_since(t0));
  const auto& s = o.result.summary;
  report << "fit: n=" << raw.n() << " p=" << raw.p() << " q=" << raw.q() << "\n"
         << "  elbo       " << format_double(s.elbo) << "\n"
         << "  converged  " << (s.converged ? "yes" : "no") << "\n"
         << "  output     " << out << "\n";
}

void cmd_simulate(const Config& user_cfg, std::ostream& report) {
  const Config cfg = user_cfg.resolved();
  const auto sc = scenario_from_config(cfg);
  const auto replicate = cfg.get_u64("sim.replicate");
  const std::string out = prepare_output(cfg);
  const auto ds = sim::simulate(sc, replicate);
  const auto& d = ds.data;
  write_matrix_tsv(join(out, "X.tsv"), {"sample", d.sample_ids, d.predictor_ids, d.X});
  write_matrix_tsv(join(out, "Y.tsv"), {"sample", d.sample_ids, d.response_ids, d.Y});
  write_pattern_tsv(join(out, "truth_pattern.tsv"), ds.truth.pattern, d.predictor_ids, d.response_ids);
  write_effects_tsv(join(out, "truth_effects.tsv"), ds.truth.pattern, ds.truth.effects,
                    d.predictor_ids, d.response_ids);
  json meta;
  meta["version"] = kVersion;
  meta["command"] = "simulate";
  meta["seed"] = sc.seed;
  meta["replicate"] = replicate;
  meta["n"] = sc.n;
  meta["p"] = sc.p;
  meta["q"] = sc.q;
  meta["n_associations"] = ds.truth.pattern.count();
  std::vector<std::string> snps, resps;
  std::vector<std::size_t> sizes;
  for (auto s : ds.truth.active_snps) {
    snps.push_back(d.predictor_ids[s]);
    sizes.push_back(ds.truth.hotspot_sizes[s]);
  }
  for (auto t : ds.truth.active_resps) resps.push_back(d.response_ids[t]);
  meta["active_snps"] = snps;
  meta["active_snp_hotspot_sizes"] = sizes;
  meta["active_responses"] = resps;
  meta["max_var_explained"] = ds.truth.var_explained.size() ? ds.truth.var_explained.maxCoeff() : 0.0;
  write_json(join(out, "scenario_meta.json"), meta);
  report << "simulate: n=" << sc.n << " p=" << sc.p << " q=" << sc.q << " replicate=" << replicate
         << "\n  associations " << ds.truth.pattern.count() << "\n  output       " << out << "\n";
}

void cmd_evaluate(const Config& user_cfg, std::ostream& report) {
  const Config cfg = user_cfg.resolved();
  const std::string ppi_path = required_path(cfg, "data.ppi");
  const std::string truth_path = required_path(cfg, "data.truth_pattern");
  if (!fs::exists(truth_path)) throw DataError("truth file not found: " + truth_path);
  const auto ppi = read_matrix_tsv(ppi_path);
  const auto truth = read_pattern_tsv(truth_path, ppi.row_ids, ppi.col_ids);
  const double cap = cfg.get_double("eval.fpr_cap");
  const double thr = cfg.get_double("eval.threshold");
  if (!(cap > 0.0 && cap <= 1.0)) throw ConfigError("eval.fpr_cap must lie in (0,1]");
  const std::string out = prepare_output(cfg);

  json metrics;
  metrics["version"] = kVersion;
  metrics["command"] = "evaluate";
  metrics["fpr_cap"] = cap;
  metrics["threshold"] = thr;
  auto area = [&](const eval::ScoredPairs& scored, const std::string& name) -> double {
    try {
      const auto roc = eval::roc_points(scored);
      metrics[name + "_roc_points"] = roc_json_and_tsv(roc, join(out, "roc_" + name + ".tsv"));
      return eval::std_partial_auc(roc, cap);
    } catch (const std::invalid_argument&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const double pair_auc = area(eval::score_matrix(ppi.values, &truth), "pairwise");
  const Eigen::VectorXd hot_score = ppi.values.rowwise().maxCoeff();
  sim::BoolMatrix hot_truth = truth.rowwise().any();
  const double hot_auc = area(eval::score_matrix(hot_score, &hot_truth), "hotspot");
  metrics["pairwise_std_pauc"] = pair_auc;
  metrics["hotspot_std_pauc"] = hot_auc;

  const auto calls = eval::call_hotspots(ppi.values, thr);
  std::vector<double> true_sizes, est_sizes;
  for (Eigen::Index s = 0; s < truth.rows(); ++s)
    if (truth.row(s).any()) {
      true_sizes.push_back(static_cast<double>(truth.row(s).count()));
      est_sizes.push_back(static_cast<double>(calls.sizes[static_cast<std::size_t>(s)]));
    }
  const double rank_corr = true_sizes.size() >= 2 ? eval::spearman(true_sizes, est_sizes)
                                                  : std::numeric_limits<double>::quiet_NaN();
  metrics["planted_hotspots"] = true_sizes.size();
  metrics["hotspot_size_spearman"] = rank_corr;
  std::size_t selected = 0, false_pos = 0;
  for (Eigen::Index s = 0; s < truth.rows(); ++s)
    for (Eigen::Index t = 0; t < truth.cols(); ++t)
      if (ppi.values(s, t) >= thr) {
        ++selected;
        if (!truth(s, t)) ++false_pos;
      }
  metrics["selected_pairs"] = selected;
  metrics["false_positive_pairs"] = false_pos;
  write_json(join(out, "metrics.json"), metrics);

  auto num = [](double v) { return std::isnan(v) ? std::string("NA") : format_double(v); };
  report << std::left << std::setw(26) << "pairwise_std_pauc" << num(pair_auc) << "\n"
         << std::setw(26) << "hotspot_std_pauc" << num(hot_auc) << "\n"
         << std::setw(26) << "hotspot_size_spearman" << num(rank_corr) << "\n"
         << std::setw(26) << "selected_pairs" << selected << "\n"
         << std::setw(26) << "false_positive_pairs" << false_pos << "\n";
}

void cmd_permute(const Config& user_cfg, std::ostream& report) {
  const Config cfg = user_cfg.resolved();
  const auto t0 = std::chrono::steady_clock::now();
  const DataSet raw = load_dataset(required_path(cfg, "data.genotypes"), required_path(cfg, "data.responses"));
  const std::size_t K = cfg.get_size("permute.n_permutations");
  const double target = cfg.get_double("permute.target_fdr");
  const std::size_t grid = cfg.get_size("permute.grid_size");
  const std::string est_name = cfg.get("permute.estimator");
  eval::FdrEstimator est;
  if (est_name == "bayesian") est = eval::FdrEstimator::kBayesian;
  else if (est_name == "empirical") est = eval::FdrEstimator::kEmpirical;
  else throw ConfigError("permute.estimator must be bayesian or empirical, got '" + est_name + "'");
  if (K < 1) throw ConfigError("permute.n_permutations must be >= 1");
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("permute.target_fdr must lie in (0,1)");
  if (grid < 2) throw ConfigError("permute.grid_size must be >= 2");
  fit_options_from_config(cfg);
  const std::string out = prepare_output(cfg);

  const FitOutcome real = run_fit(cfg, raw);
  write_fit_outputs(cfg, raw, real, out, seconds_since(t0));
  const std::string perm_dir = join(out, "permutations");
  fs::create_directories(perm_dir);
  std::vector<std::vector<double>> permuted;
  const auto seed = cfg.get_u64("run.seed");
  for (std::size_t k = 0; k < K; ++k) {
    auto rng = sim::make_rng(seed, k, kPermutationStream);
    DataSet perm = raw;
    perm.Y = sim::permute_responses(raw.Y, rng);
    const FitOutcome o = run_fit(cfg, perm);
    write_matrix_tsv(join(perm_dir, "ppi_perm_" + std::to_string(k) + ".tsv"),
                     {"predictor", raw.predictor_ids, raw.response_ids, o.full_ppi});
    permuted.push_back(flatten(o.full_ppi));
  }
  const auto thr = eval::permutation_fdr_threshold(flatten(real.full_ppi), permuted, target, est, grid);
  std::string curve = "threshold\tfdr\n";
  for (std::size_t i = 0; i < thr.grid.size(); ++i)
    curve += format_double(thr.grid[i]) + '\t' + format_double(thr.grid_fdr[i]) + '\n';
  atomic_write(join(out, "fdr_curve.tsv"), curve);
  json j;
  j["version"] = kVersion;
  j["command"] = "permute";
  j["seed"] = seed;
  j["n_permutations"] = K;
  j["estimator"] = est_name;
  j["target_fdr"] = target;
  j["threshold"] = thr.threshold;
  j["estimated_fdr"] = thr.estimated_fdr;
  j["unattainable"] = thr.unattainable;
  j["wall_time_seconds"] = seconds_since(t0);
  write_json(join(out, "fdr_threshold.json"), j);
  report << "permute: " << K << " permutations, estimator " << est_name << "\n"
         << "  threshold      " << format_double(thr.threshold)
         << (thr.unattainable ? "  (target not attainable)" : "") << "\n"
         << "  estimated_fdr  " << format_double(thr.estimated_fdr) << "\n";
}

void cmd_calibrate(const Config& user_cfg, std::ostream& report) {
  const Config cfg = user_cfg.resolved();
  const std::size_t p = cfg.get_size("calibrate.p");
  const SparsityTarget target{cfg.get_double("model.e_p"), cfg.get_double("model.v_p")};
  const std::size_t draws = cfg.get_size("calibrate.mc_draws");
  const auto seed = cfg.get_u64("run.seed");
  const auto cal = calibrate_zeta_prior(target, p);
  const std::string out = prepare_output(cfg);
  json j;
  j["version"] = kVersion;
  j["command"] = "calibrate";
  j["p"] = p;
  j["e_p"] = target.e_p;
  j["v_p"] = target.v_p;
  j["n0"] = cal.prior.n0;
  j["t0_sq"] = cal.prior.t0_sq;
  j["degenerate"] = cal.degenerate;
  j["mean_residual"] = cal.mean_residual;
  j["var_residual"] = cal.var_residual;
  report << std::left << std::setw(16) << "n0" << format_double(cal.prior.n0) << "\n"
         << std::setw(16) << "t0_sq" << format_double(cal.prior.t0_sq) << "\n";
  if (draws >= 2) {
    const auto mc = monte_carlo_count_moments(cal.prior.n0, cal.prior.t0_sq, p, draws, seed);
    const double zm = mc.mean_se > 0 ? (mc.mean - target.e_p) / mc.mean_se : 0.0;
    const double zv = mc.variance_se > 0 ? (mc.variance - target.v_p) / mc.variance_se : 0.0;
    j["monte_carlo"] = {{"draws", draws},     {"seed", seed},
                        {"mean", mc.mean},    {"mean_se", mc.mean_se},
                        {"variance", mc.variance}, {"variance_se", mc.variance_se},
                        {"mean_z", zm},       {"variance_z", zv}};
    report << std::setw(16) << "mc_mean" << format_double(mc.mean) << " (z = " << zm << ")\n"
           << std::setw(16) << "mc_variance" << format_double(mc.variance) << " (z = " << zv << ")\n";
  }
  write_json(join(out, "calibration.json"), j);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hotspot-aware variational multi-response regression"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::vector<std::string> overrides;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"fit", "fit the model to genotype and response files"},
      {"simulate", "simulate a dataset with known truth"},
      {"evaluate", "score posterior probabilities against a truth pattern"},
      {"permute", "estimate an FDR threshold from permuted responses"},
      {"calibrate", "solve (n0, t0_sq) for a sparsity target"}};
  for (const auto& [name, doc] : commands) {
    auto* sub = app.add_subcommand(name, doc);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--seed", seed, "master seed (run.seed)");
    sub->add_option("--threads", threads, "worker threads (run.threads)");
    sub->add_option("--out", out_dir, "output directory (run.out)");
    sub->add_option("--override", overrides, "KEY=VALUE, repeatable")->allow_extra_args(false);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    Config cfg = Config::load(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (seed) cfg.set("run.seed", std::to_string(*seed));
    if (threads) cfg.set("run.threads", std::to_string(*threads));
    if (out_dir) cfg.set("run.out", *out_dir);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "fit") cmd_fit(cfg, out);
    else if (name == "simulate") cmd_simulate(cfg, out);
    else if (name == "evaluate") cmd_evaluate(cfg, out);
    else if (name == "permute") cmd_permute(cfg, out);
    else cmd_calibrate(cfg, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hotspot::io
