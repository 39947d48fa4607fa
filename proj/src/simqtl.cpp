#include "hotspot/simqtl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hotspot/errors.hpp"
#include "hotspot/special_fn.hpp"

namespace hotspot::sim {

namespace {

enum Stream : std::uint64_t { kPattern = 1, kGenotypes = 2, kEffects = 3, kNoise = 4 };

void check_interval(const Interval& iv, const char* name) {
  if (!(iv.first >= 0.0 && iv.first <= iv.second && iv.second < 1.0))
    throw ConfigError(std::string(name) + " must satisfy 0 <= lo <= hi < 1");
}

double draw_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

double draw_uniform(std::mt19937_64& rng, const Interval& iv) {
  if (iv.first == iv.second) return iv.first;
  return std::uniform_real_distribution<double>(iv.first, iv.second)(rng);
}

std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t k,
                                                    std::mt19937_64& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void SimScenario::validate() const {
  if (n < 2 || p < 1 || q < 1) throw ConfigError("scenario needs n >= 2, p >= 1, q >= 1");
  if (snp_block_size < 1 || resp_block_size < 1 || chunk_size < 1)
    throw ConfigError("block and chunk sizes must be >= 1");
  check_interval(snp_autocorr, "snp_autocorr");
  check_interval(resp_equicorr, "resp_equicorr");
  if (!(maf.first > 0.0 && maf.first <= maf.second && maf.second <= 0.5))
    throw ConfigError("maf interval must lie in (0, 0.5]");
  if (!(max_var_explained > 0.0 && max_var_explained < 1.0))
    throw ConfigError("max_var_explained must lie in (0,1)");
  if (!(propensity_a > 0.0 && propensity_b > 0.0 && share_a > 0.0 && share_b > 0.0))
    throw ConfigError("Beta parameters must be positive");
  if (n_active_resps > q) throw ConfigError("more active responses than responses");
  if ((n_active_snps == 0) != (n_active_resps == 0))
    throw ConfigError("active SNP and response counts must be both zero or both positive");
  const std::size_t n_inert = n_chunks() / 2;
  const std::size_t active_slots =
      p - std::min(p, n_inert * chunk_size);  // upper bound; exact count checked at draw time
  if (n_active_snps > active_slots)
    throw ConfigError("more active SNPs (" + std::to_string(n_active_snps) +
                      ") than SNPs in non-inert chunks");
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Eigen::MatrixXd gen_genotypes(const SimScenario& sc, std::uint64_t replicate,
                              Eigen::VectorXd* maf) {
  sc.validate();
  auto rng = make_rng(sc.seed, replicate, kGenotypes);
  std::normal_distribution<double> norm(0.0, 1.0);
  const Eigen::Index n = static_cast<Eigen::Index>(sc.n), p = static_cast<Eigen::Index>(sc.p);
  Eigen::VectorXd f(p);
  for (Eigen::Index j = 0; j < p; ++j) f[j] = draw_uniform(rng, sc.maf);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, p);
  const auto bs = static_cast<Eigen::Index>(sc.snp_block_size);
  for (Eigen::Index start = 0; start < p; start += bs) {
    const Eigen::Index len = std::min(bs, p - start);
    const double rho = draw_uniform(rng, sc.snp_autocorr);
    const double innov = std::sqrt(1.0 - rho * rho);
    Eigen::VectorXd cut(len);
    for (Eigen::Index j = 0; j < len; ++j) cut[j] = special::std_normal_quantile(f[start + j]);
    for (int hap = 0; hap < 2; ++hap) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double h = norm(rng);
        for (Eigen::Index j = 0; j < len; ++j) {
          if (j > 0) h = rho * h + innov * norm(rng);
          if (h < cut[j]) G(i, start + j) += 1.0;
        }
      }
    }
  }
  if (maf) *maf = f;
  return G;
}

SimTruth gen_pattern(const SimScenario& sc) {
  auto rng = make_rng(sc.seed, 0, kPattern);
  return gen_pattern(sc, rng);
}

SimTruth gen_pattern(const SimScenario& sc, std::mt19937_64& rng) {
  sc.validate();
  SimTruth tr;
  const Eigen::Index p = static_cast<Eigen::Index>(sc.p), q = static_cast<Eigen::Index>(sc.q);
  tr.pattern = BoolMatrix::Constant(p, q, false);
  tr.effects = Eigen::MatrixXd::Zero(p, q);
  tr.var_explained = Eigen::VectorXd::Zero(q);
  tr.propensity = Eigen::VectorXd::Zero(p);
  tr.hotspot_sizes.assign(sc.p, 0);
  if (sc.n_active_snps == 0) return tr;

  const std::size_t n_chunks = sc.n_chunks();
  std::vector<std::size_t> chunk_ids(n_chunks);
  std::iota(chunk_ids.begin(), chunk_ids.end(), 0);
  const auto inert = sample_without_replacement(chunk_ids, n_chunks / 2, rng);
  std::vector<std::size_t> eligible;
  for (std::size_t s = 0; s < sc.p; ++s)
    if (!std::binary_search(inert.begin(), inert.end(), s / sc.chunk_size)) eligible.push_back(s);
  if (eligible.size() < sc.n_active_snps)
    throw ConfigError("more active SNPs than SNPs in the non-inert chunks");
  tr.active_snps = sample_without_replacement(eligible, sc.n_active_snps, rng);
  std::vector<std::size_t> all_resps(sc.q);
  std::iota(all_resps.begin(), all_resps.end(), 0);
  tr.active_resps = sample_without_replacement(all_resps, sc.n_active_resps, rng);

  // Cyclic pairing over shuffled lists covers every active SNP and response.
  auto snps = tr.active_snps;
  auto resps = tr.active_resps;
  std::shuffle(snps.begin(), snps.end(), rng);
  std::shuffle(resps.begin(), resps.end(), rng);
  const std::size_t k = snps.size(), m = resps.size();
  for (std::size_t i = 0; i < std::max(k, m); ++i)
    tr.pattern(static_cast<Eigen::Index>(snps[i % k]), static_cast<Eigen::Index>(resps[i % m])) =
        true;

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto s : tr.active_snps) {
    const double w = draw_beta(rng, sc.propensity_a, sc.propensity_b);
    tr.propensity[static_cast<Eigen::Index>(s)] = w;
    for (auto t : tr.active_resps)
      if (unif(rng) < w) tr.pattern(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = true;
  }
  for (Eigen::Index s = 0; s < p; ++s)
    tr.hotspot_sizes[static_cast<std::size_t>(s)] =
        static_cast<std::size_t>(tr.pattern.row(s).count());
  return tr;
}

void gen_effects(SimTruth& tr, const Eigen::VectorXd& maf, const SimScenario& sc,
                 std::mt19937_64& rng) {
  const Eigen::Index p = tr.pattern.rows(), q = tr.pattern.cols();
  tr.effects.setZero(p, q);
  tr.var_explained.setZero(q);
  Eigen::MatrixXd share = Eigen::MatrixXd::Zero(p, q);
  for (Eigen::Index t = 0; t < q; ++t)
    for (Eigen::Index s = 0; s < p; ++s)
      if (tr.pattern(s, t)) share(s, t) = draw_beta(rng, sc.share_a, sc.share_b);
  const Eigen::VectorXd totals = share.colwise().sum().transpose();
  const double max_total = totals.size() > 0 ? totals.maxCoeff() : 0.0;
  if (max_total <= 0.0) return;
  share *= sc.max_var_explained / max_total;
  std::bernoulli_distribution flip(0.5);
  for (Eigen::Index t = 0; t < q; ++t)
    for (Eigen::Index s = 0; s < p; ++s)
      if (tr.pattern(s, t)) {
        const double f = maf[s];
        const double mag = std::sqrt(share(s, t) / (2.0 * f * (1.0 - f)));
        tr.effects(s, t) = flip(rng) ? -mag : mag;
        tr.var_explained[t] += share(s, t);
      }
}

Eigen::MatrixXd gen_responses(const Eigen::MatrixXd& G, const SimTruth& tr, const SimScenario& sc,
                              std::mt19937_64& rng) {
  const Eigen::Index n = G.rows(), q = tr.pattern.cols();
  std::normal_distribution<double> norm(0.0, 1.0);
  Eigen::MatrixXd Y = G * tr.effects;
  const auto bs = static_cast<Eigen::Index>(sc.resp_block_size);
  Eigen::VectorXd shared(n);
  for (Eigen::Index start = 0; start < q; start += bs) {
    const Eigen::Index len = std::min(bs, q - start);
    const double rho = draw_uniform(rng, sc.resp_equicorr);
    for (Eigen::Index i = 0; i < n; ++i) shared[i] = norm(rng);
    for (Eigen::Index t = start; t < start + len; ++t) {
      const double sd = std::sqrt(std::max(0.0, 1.0 - tr.var_explained[t]));
      for (Eigen::Index i = 0; i < n; ++i)
        Y(i, t) += sd * (std::sqrt(rho) * shared[i] + std::sqrt(1.0 - rho) * norm(rng));
    }
  }
  return Y;
}

SimDataset simulate(const SimScenario& sc, std::uint64_t replicate) {
  SimDataset out;
  Eigen::VectorXd maf;
  out.data.X = gen_genotypes(sc, replicate, &maf);
  out.truth = gen_pattern(sc);
  auto eff_rng = make_rng(sc.seed, replicate, kEffects);
  gen_effects(out.truth, maf, sc, eff_rng);
  auto noise_rng = make_rng(sc.seed, replicate, kNoise);
  out.data.Y = gen_responses(out.data.X, out.truth, sc, noise_rng);
  fill_default_ids(out.data);
  return out;
}

Eigen::MatrixXd permute_responses(const Eigen::MatrixXd& Y, std::mt19937_64& rng) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(Y.rows()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd out(Y.rows(), Y.cols());
  for (Eigen::Index i = 0; i < Y.rows(); ++i) out.row(i) = Y.row(perm[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace hotspot::sim
