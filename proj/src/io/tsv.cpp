#include "hotspot/io/tsv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hotspot/errors.hpp"

namespace hotspot::io {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE)
    throw DataError(path + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
  return v;
}

std::unordered_map<std::string, Eigen::Index> index_of(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, Eigen::Index> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m.emplace(ids[i], static_cast<Eigen::Index>(i));
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw DataError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw DataError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

LabeledMatrix read_matrix_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  LabeledMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  strip_cr(line);
  auto header = split_tabs(line);
  if (header.size() < 2) throw DataError(path + ": header needs an id column and data columns");
  m.corner = header[0];
  m.col_ids.assign(header.begin() + 1, header.end());
  std::vector<double> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != header.size())
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    m.row_ids.push_back(fields[0]);
    for (std::size_t j = 1; j < fields.size(); ++j) cells.push_back(parse_cell(fields[j], path, line_no));
  }
  const auto rows = static_cast<Eigen::Index>(m.row_ids.size());
  const auto cols = static_cast<Eigen::Index>(m.col_ids.size());
  m.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m.values(i, j) = cells[static_cast<std::size_t>(i * cols + j)];
  return m;
}

std::string matrix_tsv(const LabeledMatrix& m) {
  std::string out = m.corner;
  for (const auto& c : m.col_ids) out += '\t' + c;
  out += '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    out += m.row_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) out += '\t' + format_double(m.values(i, j));
    out += '\n';
  }
  return out;
}

void write_matrix_tsv(const std::string& path, const LabeledMatrix& m) {
  if (static_cast<std::size_t>(m.values.rows()) != m.row_ids.size() ||
      static_cast<std::size_t>(m.values.cols()) != m.col_ids.size())
    throw DataError("identifier counts do not match matrix shape for " + path);
  atomic_write(path, matrix_tsv(m));
}

void write_vector_tsv(const std::string& path, const std::string& id_header,
                      const std::string& value_header, const std::vector<std::string>& ids,
                      const std::vector<double>& values) {
  std::string out = id_header + '\t' + value_header + '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) out += ids[i] + '\t' + format_double(values[i]) + '\n';
  atomic_write(path, out);
}

void write_pattern_tsv(const std::string& path, const sim::BoolMatrix& pattern,
                       const std::vector<std::string>& pid, const std::vector<std::string>& rid) {
  std::string out = "predictor\tresponse\n";
  for (Eigen::Index s = 0; s < pattern.rows(); ++s)
    for (Eigen::Index t = 0; t < pattern.cols(); ++t)
      if (pattern(s, t))
        out += pid[static_cast<std::size_t>(s)] + '\t' + rid[static_cast<std::size_t>(t)] + '\n';
  atomic_write(path, out);
}

void write_effects_tsv(const std::string& path, const sim::BoolMatrix& pattern,
                       const Eigen::MatrixXd& effects, const std::vector<std::string>& pid,
                       const std::vector<std::string>& rid) {
  std::string out = "predictor\tresponse\teffect\n";
  for (Eigen::Index s = 0; s < pattern.rows(); ++s)
    for (Eigen::Index t = 0; t < pattern.cols(); ++t)
      if (pattern(s, t))
        out += pid[static_cast<std::size_t>(s)] + '\t' + rid[static_cast<std::size_t>(t)] + '\t' +
               format_double(effects(s, t)) + '\n';
  atomic_write(path, out);
}

sim::BoolMatrix read_pattern_tsv(const std::string& path, const std::vector<std::string>& pid,
                                 const std::vector<std::string>& rid) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  const auto pi = index_of(pid), ri = index_of(rid);
  sim::BoolMatrix out = sim::BoolMatrix::Constant(static_cast<Eigen::Index>(pid.size()),
                                                  static_cast<Eigen::Index>(rid.size()), false);
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() < 2) throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
    const auto a = pi.find(f[0]);
    const auto b = ri.find(f[1]);
    if (a == pi.end() || b == ri.end())
      throw DataError(path + ":" + std::to_string(line_no) + ": unknown identifier");
    out(a->second, b->second) = true;
  }
  return out;
}

}  // namespace hotspot::io
