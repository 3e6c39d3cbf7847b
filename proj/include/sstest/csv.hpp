#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "sstest/common.hpp"
#include "sstest/errors.hpp"

namespace sstest {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_cell(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

inline std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

}  // namespace detail

// Reads a rectangular numeric CSV (rows = observations). A first line whose
// cells are not all numeric is treated as a header. Errors carry the 1-based
// file line number.
inline DataMatrix read_csv_matrix(std::istream& in,
                                  const std::string& source = "input") {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  Index ncols = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_row(line);

    if (first_content_line) {
      first_content_line = false;
      bool all_numeric = true;
      double v;
      for (const auto& c : cells)
        if (!detail::parse_cell(c, v)) { all_numeric = false; break; }
      if (!all_numeric) continue;  // header row
    }

    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!detail::parse_cell(cells[j], row[j]))
        throw parse_error(source + ": line " + std::to_string(line_no) +
                          ": non-numeric cell '" + detail::trim(cells[j]) +
                          "' in column " + std::to_string(j + 1));
      if (!std::isfinite(row[j]))
        throw parse_error(source + ": line " + std::to_string(line_no) +
                          ": non-finite value in column " + std::to_string(j + 1));
    }
    if (ncols < 0) {
      ncols = static_cast<Index>(row.size());
    } else if (static_cast<Index>(row.size()) != ncols) {
      throw parse_error(source + ": line " + std::to_string(line_no) +
                        ": expected " + std::to_string(ncols) +
                        " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error(source + ": no data rows");

  DataMatrix X(static_cast<Index>(rows.size()), ncols);
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < ncols; ++j) X(i, j) = rows[i][j];
  return X;
}

inline DataMatrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open file");
  return read_csv_matrix(in, path);
}

}  // namespace sstest
