// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_SERIES_HPP
#define MPOLAR_SERIES_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mpolar/common.hpp"

namespace mpolar {

// Named-column time series. The first column is always "t". CSV files carry
// the schema in a header row and doubles are printed with 17 significant
// digits, so a round trip through disk is value-exact and a rerun with the
// same seed is byte-identical.
class NormSeries {
 public:
  NormSeries() = default;
  explicit NormSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty() || columns_[0] != "t")
      throw DomainError("NormSeries: first column must be t");
  }

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  void append(const std::vector<Real>& row) {
    if (row.size() != columns_.size())
      throw ShapeError("NormSeries: row width mismatch");
    data_.push_back(row);
  }

  const std::vector<Real>& row(std::size_t i) const { return data_[i]; }

  bool has_column(const std::string& name) const {
    return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
  }

  int column_index(const std::string& name) const {
    auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end())
      throw DomainError("NormSeries: no column named '" + name + "'");
    return static_cast<int>(it - columns_.begin());
  }

  std::vector<Real> column(const std::string& name) const {
    const int j = column_index(name);
    std::vector<Real> out;
    out.reserve(data_.size());
    for (const auto& r : data_) out.push_back(r[j]);
    return out;
  }

  std::vector<Real> times() const { return column("t"); }

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("series: cannot open " + path + " for writing");
    write_csv_stream(out);
  }

  void write_csv_stream(std::ostream& out) const {
    for (std::size_t j = 0; j < columns_.size(); ++j)
      out << (j ? "," : "") << columns_[j];
    out << "\n";
    char buf[64];
    for (const auto& r : data_) {
      for (std::size_t j = 0; j < r.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", r[j]);
        out << (j ? "," : "") << buf;
      }
      out << "\n";
    }
  }

  static NormSeries read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("series: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("series: empty file " + path);
    NormSeries s(split_header(line));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<Real> row;
      std::istringstream ls(line);
      std::string tok;
      while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
      if (row.size() != s.columns_.size())
        throw IoError("series: " + path + ":" + std::to_string(lineno) +
                      ": wrong number of fields");
      s.data_.push_back(std::move(row));
    }
    return s;
  }

 private:
  static std::vector<std::string> split_header(const std::string& line) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    return cols;
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Real>> data_;
};

}  // namespace mpolar

#endif  // MPOLAR_SERIES_HPP
