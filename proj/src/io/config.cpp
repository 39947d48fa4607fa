#include "hotspot/io/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hotspot/errors.hpp"

namespace hotspot::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const ConfigKey* find_key(const std::string& key) {
  for (const auto& k : config_schema())
    if (k.key == key) return &k;
  return nullptr;
}

std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("config key " + key + ": expected " + what + ", got '" + value + "'");
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"run.seed", "1", "master seed for restarts, simulation and permutations"},
      {"run.threads", "0", "worker threads for per-response updates (0: OpenMP default)"},
      {"run.out", "out", "output directory"},

      {"data.genotypes", "", "samples x predictors TSV"},
      {"data.responses", "", "samples x responses TSV"},
      {"data.center", "true", "center predictors and responses before fitting"},
      {"data.ppi", "", "ppi.tsv to evaluate"},
      {"data.truth_pattern", "", "truth_pattern.tsv for evaluation"},

      {"model.propensity", "global_local", "global_local or fixed_beta"},
      {"model.e_p", "2", "prior mean number of predictors per response"},
      {"model.v_p", "100", "prior variance of the number of predictors per response"},
      {"model.n0", "", "probit offset mean; empty: calibrate from e_p and v_p"},
      {"model.t0_sq", "", "probit offset variance; used with model.n0"},
      {"model.mu_omega", "0.01", "fixed_beta: prior mean of omega_s"},
      {"model.sigma_omega_sq", "1e-4", "fixed_beta: prior variance of omega_s"},
      {"model.vague", "0.01", "shape and rate of the Gamma priors on tau_t and sigma^-2"},
      {"model.global_scale_sq", "", "sigma_0 half-Cauchy scale squared; empty: 1/q"},

      {"anneal.t_hot", "2", "initial temperature"},
      {"anneal.n_temps", "10", "number of temperatures including T = 1"},
      {"anneal.sweeps_per_temp", "1", "sweeps at each heated temperature"},

      {"fit.elbo_rel_tol", "1e-6", "relative ELBO change for convergence"},
      {"fit.max_iters_cold", "1000", "maximum sweeps at T = 1"},
      {"fit.restarts", "1", "independent restarts; the best ELBO is kept"},
      {"fit.average_restarts", "false", "average summaries across restarts instead"},
      {"fit.log_moment", "quadrature", "E log lambda^-2: quadrature or plug_in"},
      {"fit.gamma_init", "", "initial inclusion probability; empty: prior value"},

      {"sim.replicate", "0", "replicate index (pattern is shared across replicates)"},
      {"sim.n", "300", "samples"},
      {"sim.p", "200", "SNPs"},
      {"sim.q", "2000", "responses"},
      {"sim.snp_block_size", "50", "SNPs per autocorrelated block"},
      {"sim.snp_autocorr_lo", "0.75", "lower bound of block autocorrelation"},
      {"sim.snp_autocorr_hi", "0.95", "upper bound of block autocorrelation"},
      {"sim.maf_lo", "0.05", "lower bound of minor allele frequency"},
      {"sim.maf_hi", "0.5", "upper bound of minor allele frequency"},
      {"sim.resp_block_size", "10", "responses per equicorrelated block"},
      {"sim.resp_equicorr_lo", "0", "lower bound of response block correlation"},
      {"sim.resp_equicorr_hi", "0.25", "upper bound of response block correlation"},
      {"sim.chunk_size", "200", "SNP chunk size; half the chunks are inert"},
      {"sim.n_active_snps", "10", "SNPs with at least one association"},
      {"sim.n_active_resps", "200", "responses with at least one association"},
      {"sim.propensity_a", "1", "Beta shape a of extra-association probabilities"},
      {"sim.propensity_b", "5", "Beta shape b of extra-association probabilities"},
      {"sim.share_a", "2", "Beta shape a of variance shares"},
      {"sim.share_b", "5", "Beta shape b of variance shares"},
      {"sim.max_var_explained", "0.25", "largest per-response variance explained"},

      {"eval.fpr_cap", "0.01", "false positive rate cap for the partial AUC"},
      {"eval.threshold", "0.5", "ppi threshold for hotspot sizes"},

      {"permute.n_permutations", "30", "number of response permutations"},
      {"permute.target_fdr", "0.2", "target false discovery rate"},
      {"permute.estimator", "bayesian", "bayesian or empirical"},
      {"permute.grid_size", "1000", "threshold grid resolution"},

      {"calibrate.p", "1000", "number of predictors for calibration"},
      {"calibrate.mc_draws", "10000000", "Monte Carlo draws for verification"},
  };
  return schema;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string name = trim(s.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    if (!find_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    cfg.values_[key] = trim(s.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::serialize() const {
  std::string out, section;
  for (const auto& k : config_schema()) {
    const auto it = values_.find(k.key);
    if (it == values_.end()) continue;
    const std::string sec = section_of(k.key);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += k.key.substr(sec.size() + 1) + " = " + it->second + '\n';
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = trim(value);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be KEY=VALUE: " + assignment);
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Config Config::resolved() const {
  Config out = *this;
  for (const auto& k : config_schema())
    if (!out.has(k.key)) out.values_[k.key] = k.default_value;
  return out;
}

std::string Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  const auto* k = find_key(key);
  if (!k) throw ConfigError("unknown key '" + key + "'");
  return k->default_value;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get(key);
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) bad_value(key, v, "a number");
  return x;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string v = get(key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size() || errno == ERANGE)
    bad_value(key, v, "a non-negative integer");
  return x;
}

std::size_t Config::get_size(const std::string& key) const {
  return static_cast<std::size_t>(get_u64(key));
}

int Config::get_int(const std::string& key) const {
  const std::string v = get(key);
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) bad_value(key, v, "an integer");
  return static_cast<int>(x);
}

bool Config::get_bool(const std::string& key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

ModelSpec model_spec_from_config(const Config& cfg, std::size_t p, std::size_t q,
                                 CalibrationResult* calibration) {
  const std::string kind = cfg.get("model.propensity");
  const double vague = cfg.get_double("model.vague");
  ModelSpec spec;
  if (kind == "global_local") {
    ZetaPrior zeta;
    if (cfg.get("model.n0").empty()) {
      if (!cfg.get("model.t0_sq").empty())
        throw ConfigError("model.t0_sq is set but model.n0 is empty");
      const auto cal = calibrate_zeta_prior({cfg.get_double("model.e_p"), cfg.get_double("model.v_p")}, p);
      if (calibration) *calibration = cal;
      zeta = cal.prior;
    } else {
      zeta.n0 = cfg.get_double("model.n0");
      zeta.t0_sq = cfg.get("model.t0_sq").empty() ? 0.0 : cfg.get_double("model.t0_sq");
    }
    spec = ModelSpec::global_local(p, q, zeta, vague);
  } else if (kind == "fixed_beta") {
    const BetaPropensitySpec beta(cfg.get_double("model.mu_omega"),
                                  cfg.get_double("model.sigma_omega_sq"));
    spec = ModelSpec::fixed_beta(p, q, beta, vague);
  } else {
    throw ConfigError("model.propensity must be global_local or fixed_beta, got '" + kind + "'");
  }
  if (!cfg.get("model.global_scale_sq").empty())
    spec.global_scale_sq_prior = cfg.get_double("model.global_scale_sq");
  spec.validate();
  return spec;
}

vb::FitOptions fit_options_from_config(const Config& cfg) {
  vb::FitOptions o;
  o.elbo_rel_tol = cfg.get_double("fit.elbo_rel_tol");
  o.max_iters_cold = cfg.get_size("fit.max_iters_cold");
  o.restarts = cfg.get_size("fit.restarts");
  o.rng_seed = cfg.get_u64("run.seed");
  o.average_restarts = cfg.get_bool("fit.average_restarts");
  o.threads = cfg.get_int("run.threads");
  const std::string lm = cfg.get("fit.log_moment");
  if (lm == "quadrature") o.log_moment = vb::LogMomentMode::kQuadrature;
  else if (lm == "plug_in") o.log_moment = vb::LogMomentMode::kPlugIn;
  else throw ConfigError("fit.log_moment must be quadrature or plug_in, got '" + lm + "'");
  if (!cfg.get("fit.gamma_init").empty()) o.gamma_init = cfg.get_double("fit.gamma_init");
  try {
    o.schedule = vb::make_schedule(cfg.get_double("anneal.t_hot"), cfg.get_size("anneal.n_temps"),
                                   cfg.get_size("anneal.sweeps_per_temp"));
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("annealing schedule: ") + e.what());
  }
  o.validate();
  return o;
}

sim::SimScenario scenario_from_config(const Config& cfg) {
  sim::SimScenario sc;
  sc.n = cfg.get_size("sim.n");
  sc.p = cfg.get_size("sim.p");
  sc.q = cfg.get_size("sim.q");
  sc.snp_block_size = cfg.get_size("sim.snp_block_size");
  sc.snp_autocorr = {cfg.get_double("sim.snp_autocorr_lo"), cfg.get_double("sim.snp_autocorr_hi")};
  sc.maf = {cfg.get_double("sim.maf_lo"), cfg.get_double("sim.maf_hi")};
  sc.resp_block_size = cfg.get_size("sim.resp_block_size");
  sc.resp_equicorr = {cfg.get_double("sim.resp_equicorr_lo"), cfg.get_double("sim.resp_equicorr_hi")};
  sc.chunk_size = cfg.get_size("sim.chunk_size");
  sc.n_active_snps = cfg.get_size("sim.n_active_snps");
  sc.n_active_resps = cfg.get_size("sim.n_active_resps");
  sc.propensity_a = cfg.get_double("sim.propensity_a");
  sc.propensity_b = cfg.get_double("sim.propensity_b");
  sc.share_a = cfg.get_double("sim.share_a");
  sc.share_b = cfg.get_double("sim.share_b");
  sc.max_var_explained = cfg.get_double("sim.max_var_explained");
  sc.seed = cfg.get_u64("run.seed");
  sc.validate();
  return sc;
}

}  // namespace hotspot::io
