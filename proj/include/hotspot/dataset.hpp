#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hotspot {

/// n x p predictors and n x q responses with identifiers.
struct DataSet {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  std::vector<std::string> sample_ids;
  std::vector<std::string> predictor_ids;
  std::vector<std::string> response_ids;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
  std::size_t q() const { return static_cast<std::size_t>(Y.cols()); }

  /// Throws DataError on shape or identifier inconsistencies.
  void validate() const;
};

struct PreparedData {
  DataSet data;
  std::vector<std::size_t> kept_predictors;     // indices into the raw predictor set
  std::vector<std::size_t> dropped_predictors;  // zero-variance columns
};

/// Drops zero-variance predictor columns and optionally centers X and Y.
PreparedData prepare_dataset(const DataSet& raw, bool center = true);

/// Fills missing identifiers with "sample_i", "snp_j", "resp_k".
void fill_default_ids(DataSet& d);

}  // namespace hotspot
