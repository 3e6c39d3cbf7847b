#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <string>

namespace sstest {

// Observation matrix: rows are i.i.d. samples, columns are variables.
// Row-major storage so that the row-wise solver loops stream through memory.
using DataMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Norms below this are treated as exact zeros to avoid overflow in reciprocals.
inline constexpr double kNormFloor = 1e-300;

// All user-facing numeric output uses 6 significant digits.
inline std::string format_g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// Round a value through its 6-significant-digit decimal representation, so
// that report files carry the same digits regardless of writer.
inline double round_g6(double x) {
  return std::strtod(format_g6(x).c_str(), nullptr);
}

}  // namespace sstest
