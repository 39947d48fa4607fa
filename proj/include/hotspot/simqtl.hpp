#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hotspot/dataset.hpp"

namespace hotspot::sim {

using Interval = std::pair<double, double>;

struct SimScenario {
  std::size_t n = 300;
  std::size_t p = 200;
  std::size_t q = 2000;
  std::size_t snp_block_size = 50;
  Interval snp_autocorr{0.75, 0.95};
  Interval maf{0.05, 0.5};
  std::size_t resp_block_size = 10;
  Interval resp_equicorr{0.0, 0.25};
  std::size_t chunk_size = 200;
  std::size_t n_active_snps = 10;
  std::size_t n_active_resps = 200;
  double propensity_a = 1.0;  // omega_s ~ Beta(a, b) for extra associations
  double propensity_b = 5.0;
  double share_a = 2.0;  // per-pair variance shares ~ Beta(a, b) before rescaling
  double share_b = 5.0;
  double max_var_explained = 0.25;
  std::uint64_t seed = 1;

  std::size_t n_chunks() const { return (p + chunk_size - 1) / chunk_size; }
  /// Throws ConfigError for invalid or infeasible scenarios.
  void validate() const;
};

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SimTruth {
  BoolMatrix pattern;              // p x q
  Eigen::MatrixXd effects;         // p x q, zero off-pattern
  Eigen::VectorXd var_explained;   // per response, population scale
  std::vector<std::size_t> hotspot_sizes;
  Eigen::VectorXd propensity;      // omega_s (0 for inactive SNPs)
  std::vector<std::size_t> active_snps;
  std::vector<std::size_t> active_resps;
};

/// Engine seeded from (seed, replicate, stream) only.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream);

/// n x p genotypes in {0,1,2}; maf receives the per-SNP allele frequencies.
Eigen::MatrixXd gen_genotypes(const SimScenario& sc, std::uint64_t replicate,
                              Eigen::VectorXd* maf = nullptr);

/// Association skeleton; depends on the scenario seed only.
SimTruth gen_pattern(const SimScenario& sc, std::mt19937_64& rng);
SimTruth gen_pattern(const SimScenario& sc);

/// Draws variance shares and signs for the pattern and fills effects and
/// var_explained, using the allele frequencies of the current replicate.
void gen_effects(SimTruth& truth, const Eigen::VectorXd& maf, const SimScenario& sc,
                 std::mt19937_64& rng);

/// y = X beta + block-equicorrelated noise with variance 1 - H_t.
Eigen::MatrixXd gen_responses(const Eigen::MatrixXd& genotypes, const SimTruth& truth,
                              const SimScenario& sc, std::mt19937_64& rng);

struct SimDataset {
  DataSet data;
  SimTruth truth;
};

/// Full replicate: genotypes, shared pattern, effects, responses.
SimDataset simulate(const SimScenario& sc, std::uint64_t replicate);

/// Applies one random row permutation to every response column.
Eigen::MatrixXd permute_responses(const Eigen::MatrixXd& responses, std::mt19937_64& rng);

}  // namespace hotspot::sim
