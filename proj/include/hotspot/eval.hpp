#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hotspot/dataset.hpp"

namespace hotspot::eval {

struct ScoredPair {
  std::size_t predictor;
  std::size_t response;
  double score;
  std::optional<bool> truth;
};
using ScoredPairs = std::vector<ScoredPair>;

struct RocPoint {
  double fpr;
  double tpr;
};

/// Flattens a p x q score matrix with an optional p x q truth matrix.
ScoredPairs score_matrix(const Eigen::MatrixXd& scores,
                         const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>* truth = nullptr);

/// ROC curve with tied scores grouped into one step; starts at (0,0) and ends
/// at (1,1). Throws std::invalid_argument without both classes.
std::vector<RocPoint> roc_points(const ScoredPairs& scored);

/// Area under the ROC curve restricted to FPR in [0, cap], standardized as
/// 100 * (1 + (pAUC - cap^2/2) / (cap - cap^2/2)) / 2.
double std_partial_auc(const ScoredPairs& scored, double fpr_cap = 0.01);
double std_partial_auc(const std::vector<RocPoint>& roc, double fpr_cap);

struct HotspotCall {
  std::vector<std::size_t> sizes;
  double threshold;
};

/// size_s = #{t : ppi_st >= threshold}.
HotspotCall call_hotspots(const Eigen::MatrixXd& ppi, double threshold = 0.5);

struct FdrEstimate {
  double fdr;
  std::size_t selected;
  bool empty_selection;
};

/// Mean of (1 - ppi) over {ppi >= threshold}.
FdrEstimate bayesian_fdr(const std::vector<double>& ppis, double threshold);

enum class FdrEstimator { kBayesian, kEmpirical };

struct ThresholdResult {
  double threshold;
  double estimated_fdr;
  bool unattainable;
  std::vector<double> grid;
  std::vector<double> grid_fdr;  // monotone envelope used for interpolation
};

/// Smallest threshold on the grid k/grid_size (k = 1..grid_size) whose
/// smoothed FDR estimate is <= target. Permuted runs are pooled.
ThresholdResult permutation_fdr_threshold(const std::vector<double>& real_ppis,
                                          const std::vector<std::vector<double>>& permuted_ppis,
                                          double target_fdr = 0.2,
                                          FdrEstimator estimator = FdrEstimator::kBayesian,
                                          std::size_t grid_size = 1000);

/// Shape-preserving piecewise-cubic (Fritsch-Carlson) interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_, d_;
};

struct ScreenResult {
  Eigen::MatrixXd pvalues;  // p x q
  std::vector<std::size_t> zero_variance_predictors;
};

/// Simple-regression slope t-test for every (predictor, response) pair.
ScreenResult univariate_screen(const DataSet& data);

/// Indices rejected by the Benjamini-Hochberg step-up rule.
std::vector<std::size_t> benjamini_hochberg(const std::vector<double>& pvalues, double fdr_level);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace hotspot::eval
