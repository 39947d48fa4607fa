#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hotspot/eval.hpp"

using namespace hotspot;
using namespace hotspot::eval;

namespace {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

ScoredPairs pairs(const std::vector<double>& scores, const std::vector<bool>& truth) {
  ScoredPairs out;
  for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({i, 0, scores[i], truth[i]});
  return out;
}

bool same_roc(const std::vector<RocPoint>& a, const std::vector<RocPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i].fpr - b[i].fpr) > 1e-15 || std::abs(a[i].tpr - b[i].tpr) > 1e-15) return false;
  return true;
}

}  // namespace

TEST_CASE("ROC staircases") {
  CHECK(same_roc(roc_points(pairs({0.9, 0.8, 0.2, 0.1}, {true, true, false, false})),
                 {{0, 0}, {0, 0.5}, {0, 1}, {0.5, 1}, {1, 1}}));
  CHECK(same_roc(roc_points(pairs({0.5, 0.5, 0.5}, {true, false, false})), {{0, 0}, {1, 1}}));
  CHECK(same_roc(roc_points(pairs({0.9, 0.8, 0.4, 0.1}, {true, false, true, false})),
                 {{0, 0}, {0, 0.5}, {0.5, 0.5}, {0.5, 1}, {1, 1}}));
  CHECK_THROWS_AS(roc_points(pairs({0.1, 0.2}, {true, true})), std::invalid_argument);
  ScoredPairs unlabeled{{0, 0, 0.3, std::nullopt}};
  CHECK_THROWS_AS(roc_points(unlabeled), std::invalid_argument);
}

TEST_CASE("standardized partial AUC") {
  const auto toy = pairs({0.9, 0.8, 0.4, 0.1}, {true, false, true, false});
  CHECK(std_partial_auc(toy, 1.0) == doctest::Approx(75.0).epsilon(1e-14));
  CHECK(std_partial_auc(pairs({0.9, 0.8, 0.2, 0.1}, {true, true, false, false}), 0.01) ==
        doctest::Approx(100.0).epsilon(1e-14));
  CHECK(std_partial_auc(std::vector<RocPoint>{{0, 0}, {1, 1}}, 0.01) ==
        doctest::Approx(50.0).epsilon(1e-14));
  CHECK(std_partial_auc(std::vector<RocPoint>{{0, 0}, {1, 1}}, 0.3) ==
        doctest::Approx(50.0).epsilon(1e-14));

  // Perfect ppi matrix against a planted pattern.
  BoolMatrix truth = BoolMatrix::Constant(30, 50, false);
  Eigen::MatrixXd ppi = Eigen::MatrixXd::Constant(30, 50, 0.01);
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 10; ++t) {
      truth(s, t) = true;
      ppi(s, t) = 0.9;
    }
  CHECK(std_partial_auc(score_matrix(ppi, &truth), 0.01) == doctest::Approx(100.0));

  // Random scores give about 50; invariant under monotone transforms.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  ScoredPairs rnd;
  for (std::size_t i = 0; i < 200000; ++i) rnd.push_back({i, 0, u(rng), u(rng) < 0.1});
  const double a = std_partial_auc(rnd, 0.05);
  CHECK(std::abs(a - 50.0) < 3.0);
  auto transformed = rnd;
  for (auto& sp : transformed) sp.score = std::exp(3.0 * sp.score) - 7.0;
  CHECK(std_partial_auc(transformed, 0.05) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("hotspot calling") {
  Eigen::MatrixXd ppi = Eigen::MatrixXd::Zero(4, 10);
  CHECK(call_hotspots(ppi).sizes == std::vector<std::size_t>(4, 0));
  ppi.row(2).head(7).setConstant(0.6);
  ppi(1, 3) = 0.5;
  const auto call = call_hotspots(ppi);
  CHECK(call.sizes == std::vector<std::size_t>{0, 1, 7, 0});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd r(20, 40);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = u(rng);
  auto prev = call_hotspots(r, 0.0).sizes;
  for (double thr = 0.05; thr <= 1.0; thr += 0.05) {
    const auto cur = call_hotspots(r, thr).sizes;
    for (std::size_t s = 0; s < cur.size(); ++s) CHECK(cur[s] <= prev[s]);
    prev = cur;
  }
}

TEST_CASE("Bayesian FDR") {
  CHECK(bayesian_fdr({0.99, 0.95, 0.6}, 0.9).fdr == doctest::Approx(0.03).epsilon(1e-14));
  CHECK(bayesian_fdr({1.0, 1.0}, 0.3).fdr == 0.0);
  const auto empty = bayesian_fdr({0.2, 0.4}, 0.5);
  CHECK(empty.empty_selection);
  CHECK(empty.fdr == 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(500);
  for (auto& x : v) x = u(rng);
  double prev = 1.0;
  for (double thr = 0.0; thr < 1.0; thr += 0.01) {
    const double f = bayesian_fdr(v, thr).fdr;
    CHECK(f <= prev + 1e-15);
    prev = f;
  }
}

TEST_CASE("monotone cubic interpolation") {
  MonotoneCubic m({0.0, 1.0, 2.0, 3.0, 4.0}, {1.0, 0.9, 0.9, 0.2, 0.0});
  CHECK(m(2.0) == 0.9);
  CHECK(m(-1.0) == 1.0);
  CHECK(m(9.0) == 0.0);
  double prev = m(0.0);
  for (double x = 0.0; x <= 4.0; x += 0.001) {
    const double y = m(x);
    CHECK(y <= prev + 1e-14);
    prev = y;
  }
  // Flat segment stays flat.
  for (double x = 1.0; x <= 2.0; x += 0.05) CHECK(m(x) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_THROWS_AS(MonotoneCubic({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("permutation FDR thresholds") {
  std::vector<double> ones(50, 1.0), zeros(50, 0.0);
  for (auto est : {FdrEstimator::kBayesian, FdrEstimator::kEmpirical}) {
    const auto r = permutation_fdr_threshold(ones, {zeros}, 0.2, est);
    CHECK_FALSE(r.unattainable);
    CHECK(r.threshold == doctest::Approx(0.001));
    CHECK(r.estimated_fdr == 0.0);
  }

  // Empirical estimator with one grid point exactly at target.
  {
    std::vector<double> real{0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};
    std::vector<double> perm{0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.15};
    // grid 1/10: at threshold 0.8 the real count is 2 and the permuted count is 1,
    // above it the estimate is 0; at 0.7 it is 2/3.
    const auto r = permutation_fdr_threshold(real, {perm}, 0.5, FdrEstimator::kEmpirical, 10);
    CHECK_FALSE(r.unattainable);
    CHECK(r.threshold == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.estimated_fdr == doctest::Approx(0.5).epsilon(1e-12));
  }

  // Mixture of null and signal ppis: the threshold matches a brute-force grid search.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> real;
  for (int i = 0; i < 70; ++i) real.push_back(std::pow(u(rng), 3.0));
  for (int i = 0; i < 30; ++i) real.push_back(1.0 - 0.3 * std::pow(u(rng), 2.0));
  std::vector<std::vector<double>> perms(5);
  for (auto& run : perms)
    for (int i = 0; i < 100; ++i) run.push_back(std::pow(u(rng), 3.0));
  const std::size_t grid = 1000;
  const auto r = permutation_fdr_threshold(real, perms, 0.1, FdrEstimator::kEmpirical, grid);
  auto raw = [&](double thr) {
    double nr = 0, np = 0;
    for (double v : real) nr += v >= thr;
    for (const auto& run : perms)
      for (double v : run) np += v >= thr;
    return nr == 0 ? -1.0 : std::min(1.0, np / 5.0 / nr);
  };
  double brute = 1.0;
  for (std::size_t k = grid; k >= 1; --k) {
    const double thr = static_cast<double>(k) / grid;
    const double f = raw(thr);
    if (f > 0.1) break;
    if (f >= 0.0) brute = thr;
  }
  CHECK_FALSE(r.unattainable);
  CHECK(r.threshold <= brute + 1e-12);
  CHECK(r.threshold > brute - 1.0 / grid);

  // Noise with matching permutations at a strict target is unattainable.
  std::vector<double> noise(200);
  for (auto& v : noise) v = u(rng);
  const auto bad = permutation_fdr_threshold(noise, {noise}, 0.05, FdrEstimator::kEmpirical);
  CHECK(bad.unattainable);
  CHECK(bad.threshold == 1.0);
  CHECK_THROWS_AS(permutation_fdr_threshold(noise, {}, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(permutation_fdr_threshold(noise, {noise}, 1.0), std::invalid_argument);
}

TEST_CASE("univariate screening") {
  DataSet d;
  d.X.resize(5, 2);
  d.Y.resize(5, 2);
  d.X << 1, 3, 2, 3, 3, 3, 4, 3, 5, 3;
  d.Y << 2.1, 0.3, 3.9, -1.2, 6.2, 0.8, 7.8, 0.1, 10.1, -0.4;
  const auto r = univariate_screen(d);
  CHECK(r.pvalues(0, 0) == doctest::Approx(0.000059415391117553522638).epsilon(1e-12));
  CHECK(r.pvalues(0, 1) == doctest::Approx(0.97349908606414242623).epsilon(1e-12));
  CHECK(r.pvalues(1, 0) == 1.0);
  CHECK(r.zero_variance_predictors == std::vector<std::size_t>{1});

  DataSet exact;
  exact.X = Eigen::VectorXd::LinSpaced(10, 0.0, 9.0);
  exact.Y = 2.5 * exact.X;
  CHECK(univariate_screen(exact).pvalues(0, 0) < 1e-12);

  // Null p-values are uniform.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0, 1);
  DataSet null;
  null.X.resize(50, 100);
  null.Y.resize(50, 100);
  for (Eigen::Index i = 0; i < null.X.size(); ++i) null.X.data()[i] = z(rng);
  for (Eigen::Index i = 0; i < null.Y.size(); ++i) null.Y.data()[i] = z(rng);
  const auto pv = univariate_screen(null).pvalues;
  std::vector<double> v(pv.data(), pv.data() + pv.size());
  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double n = static_cast<double>(v.size());
    ks = std::max({ks, std::abs(v[i] - i / n), std::abs(v[i] - (i + 1) / n)});
  }
  CHECK(ks <= 0.02);
}

TEST_CASE("Benjamini-Hochberg") {
  const std::vector<double> p{0.001, 0.008, 0.039, 0.041, 0.042, 0.06, 0.4, 0.9};
  CHECK(benjamini_hochberg(p, 0.05) == std::vector<std::size_t>{0, 1});
  CHECK(benjamini_hochberg(std::vector<double>(5, 1.0), 0.2).empty());
  CHECK(benjamini_hochberg(std::vector<double>(5, 0.0), 0.2).size() == 5);
  std::size_t prev = 0;
  for (double lvl = 0.01; lvl < 1.0; lvl += 0.01) {
    const auto k = benjamini_hochberg(p, lvl).size();
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("Spearman correlation") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Ties use average ranks: ranks {1.5,1.5,3,4} vs {1,2,3,4}.
  CHECK(spearman({1, 1, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(0.9486832980505138).epsilon(1e-14));
  CHECK(spearman({1, 2, 3}, {1, 1, 1}) == 0.0);
  CHECK_THROWS_AS(spearman({1}, {1}), std::invalid_argument);
}
