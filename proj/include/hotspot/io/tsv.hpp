#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hotspot/simqtl.hpp"

namespace hotspot::io {

/// Header row holds the corner label then column ids; each row starts with
/// its id.
struct LabeledMatrix {
  std::string corner = "id";
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  Eigen::MatrixXd values;
};

/// %.17g; round-trips every finite double.
std::string format_double(double v);

/// Writes to a temporary sibling then renames over the target.
void atomic_write(const std::string& path, const std::string& content);

/// Throws DataError on unreadable files, ragged rows or non-numeric cells.
LabeledMatrix read_matrix_tsv(const std::string& path);
std::string matrix_tsv(const LabeledMatrix& m);
void write_matrix_tsv(const std::string& path, const LabeledMatrix& m);

/// Two-column table: id, value.
void write_vector_tsv(const std::string& path, const std::string& id_header,
                      const std::string& value_header, const std::vector<std::string>& ids,
                      const std::vector<double>& values);

/// Sparse truth files: (predictor, response) and (predictor, response, effect).
void write_pattern_tsv(const std::string& path, const sim::BoolMatrix& pattern,
                       const std::vector<std::string>& predictor_ids,
                       const std::vector<std::string>& response_ids);
void write_effects_tsv(const std::string& path, const sim::BoolMatrix& pattern,
                       const Eigen::MatrixXd& effects,
                       const std::vector<std::string>& predictor_ids,
                       const std::vector<std::string>& response_ids);
/// Reads a sparse pattern into a dense matrix indexed by the given ids.
sim::BoolMatrix read_pattern_tsv(const std::string& path,
                                 const std::vector<std::string>& predictor_ids,
                                 const std::vector<std::string>& response_ids);

}  // namespace hotspot::io
