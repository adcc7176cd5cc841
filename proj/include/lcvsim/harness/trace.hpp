#pragma once

#include <cstddef>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::harness {

/// Column-labelled table of doubles, row-major.  One row per control sample.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const {
    return columns_.empty() ? 0 : data_.size() / columns_.size();
  }

  void add_row(std::span<const double> values) {
    if (values.size() != columns_.size()) {
      throw InputDomainError("trace row has " +
                             std::to_string(values.size()) +
                             " values, expected " +
                             std::to_string(columns_.size()));
    }
    data_.insert(data_.end(), values.begin(), values.end());
  }

  double at(std::size_t row, std::size_t col) const {
    return data_[row * columns_.size() + col];
  }

  /// Index of a column, or npos when absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i] == name) return i;
    }
    return npos;
  }

  bool has(std::string_view name) const { return find(name) != npos; }

  /// Index of a column that must exist.
  std::size_t require(std::string_view name) const {
    const auto idx = find(name);
    if (idx == npos) {
      throw SchemaError("trace is missing column '" + std::string(name) + "'");
    }
    return idx;
  }

  std::vector<double> column(std::string_view name) const {
    const auto idx = require(name);
    std::vector<double> out;
    out.reserve(rows());
    for (std::size_t r = 0; r < rows(); ++r) out.push_back(at(r, idx));
    return out;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
};

inline void write_csv(const Trace& trace, std::ostream& os) {
  const auto& cols = trace.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    os << cols[i];
  }
  os << '\n';
  for (std::size_t r = 0; r < trace.rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) os << ',';
      os << format_double(trace.at(r, c));
    }
    os << '\n';
  }
}

inline void write_csv_file(const Trace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InputDomainError("cannot open for writing: " + path);
  write_csv(trace, os);
}

inline Trace read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty csv", 0);
  auto header = split_tokens(trim(line), ",");
  if (header.empty()) throw ParseError("csv header has no columns", 1);
  Trace trace(std::move(header));
  std::vector<double> row;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto tokens = split_tokens(t, ",");
    row.clear();
    row.reserve(tokens.size());
    for (const auto& tok : tokens) row.push_back(parse_double(tok));
    if (row.size() != trace.columns().size()) {
      throw ParseError("csv row width mismatch", line_no);
    }
    trace.add_row(row);
  }
  return trace;
}

inline Trace read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputDomainError("cannot open: " + path);
  return read_csv(is);
}

}  // namespace lcvsim::harness
