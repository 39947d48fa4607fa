#include "hotspot/dataset.hpp"

#include <cmath>

#include "hotspot/errors.hpp"

namespace hotspot {

void DataSet::validate() const {
  if (X.rows() != Y.rows()) {
    throw DataError("sample count mismatch: predictors have " + std::to_string(X.rows()) +
                    " rows, responses have " + std::to_string(Y.rows()));
  }
  if (X.rows() < 2) throw DataError("need at least two samples");
  if (X.cols() < 1 || Y.cols() < 1) throw DataError("empty predictor or response matrix");
  if (!sample_ids.empty() && sample_ids.size() != n())
    throw DataError("sample identifier count does not match the data");
  if (!predictor_ids.empty() && predictor_ids.size() != p())
    throw DataError("predictor identifier count does not match the data");
  if (!response_ids.empty() && response_ids.size() != q())
    throw DataError("response identifier count does not match the data");
  if (!X.allFinite() || !Y.allFinite()) throw DataError("non-finite values in input data");
}

void fill_default_ids(DataSet& d) {
  auto fill = [](std::vector<std::string>& ids, std::size_t k, const char* stem) {
    if (ids.size() == k) return;
    ids.resize(k);
    for (std::size_t i = 0; i < k; ++i) ids[i] = std::string(stem) + std::to_string(i + 1);
  };
  fill(d.sample_ids, d.n(), "sample_");
  fill(d.predictor_ids, d.p(), "snp_");
  fill(d.response_ids, d.q(), "resp_");
}

PreparedData prepare_dataset(const DataSet& raw, bool center) {
  raw.validate();
  PreparedData out;
  for (Eigen::Index j = 0; j < raw.X.cols(); ++j) {
    const auto col = raw.X.col(j);
    const double mean = col.mean();
    const double ss = (col.array() - mean).square().sum();
    if (ss > 1e-12 * std::max(1.0, col.squaredNorm()))
      out.kept_predictors.push_back(static_cast<std::size_t>(j));
    else
      out.dropped_predictors.push_back(static_cast<std::size_t>(j));
  }
  if (out.kept_predictors.empty()) throw DataError("all predictor columns have zero variance");

  DataSet& d = out.data;
  d.X.resize(raw.X.rows(), static_cast<Eigen::Index>(out.kept_predictors.size()));
  for (std::size_t k = 0; k < out.kept_predictors.size(); ++k)
    d.X.col(static_cast<Eigen::Index>(k)) =
        raw.X.col(static_cast<Eigen::Index>(out.kept_predictors[k]));
  d.Y = raw.Y;
  d.sample_ids = raw.sample_ids;
  d.response_ids = raw.response_ids;
  if (!raw.predictor_ids.empty())
    for (auto j : out.kept_predictors) d.predictor_ids.push_back(raw.predictor_ids[j]);
  if (center) {
    d.X.rowwise() -= d.X.colwise().mean();
    d.Y.rowwise() -= d.Y.colwise().mean();
  }
  return out;
}

}  // namespace hotspot
