#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sstest/common.hpp"
#include "sstest/errors.hpp"

namespace sstest {

// Joint spatial-median / diagonal-scatter estimate. `d` holds the diagonal of
// D (squared scales), so residuals are formed as (X_i - theta) / sqrt(d).
//
// A converged estimate satisfies both estimating equations:
//   residual_location = || n^{-1} sum_i U(eps_i) ||        <= tol_loc
//   residual_scale    = max_j | (p/n) sum_i U(eps_i)_j^2 - 1 | <= tol_scale
//
// The scale equations are invariant under d -> c d for any c > 0 (sign rows
// have unit norm), so `d` is pinned only up to a common positive factor whose
// value depends on the initialization. Every statistic built on an HREstimate
// is invariant to that factor.
struct HREstimate {
  Vector theta;
  Vector d;
  int iterations = 0;
  bool converged = false;
  double residual_location = std::numeric_limits<double>::infinity();
  double residual_scale = std::numeric_limits<double>::infinity();
};

struct SolverConfig {
  double tol_loc = 1e-6;
  double tol_scale = 1e-6;
  int max_iter = 100;
  // Column means / variances are used as initial estimates when absent.
  std::optional<HREstimate> warm_start;
};

namespace detail {

// Fixed-point solve over the rows of X, optionally skipping two rows (pass -1
// to keep all). Skipping in place keeps the leave-two-out sweep allocation-free.
inline HREstimate hr_solve(const DataMatrix& X, Index skip_a, Index skip_b,
                           const SolverConfig& cfg) {
  const Index n = X.rows();
  const Index p = X.cols();
  const Index m = n - (skip_a >= 0 ? 1 : 0) - (skip_b >= 0 ? 1 : 0);
  if (m < 2) throw sample_too_small_error("hr_estimate: fewer than 2 rows");
  if (p < 2) throw dimension_too_small_error("hr_estimate: fewer than 2 columns");
  if (cfg.tol_loc <= 0.0 || cfg.tol_scale <= 0.0)
    throw invalid_input_error("hr_estimate: tolerances must be positive");
  if (cfg.max_iter < 1)
    throw invalid_input_error("hr_estimate: max_iter must be at least 1");

  HREstimate est;
  if (cfg.warm_start) {
    if (cfg.warm_start->theta.size() != p || cfg.warm_start->d.size() != p)
      throw invalid_input_error("hr_estimate: warm start dimension mismatch");
    if ((cfg.warm_start->d.array() <= 0.0).any())
      throw invalid_scale_error("hr_estimate: warm start scales must be positive");
    est.theta = cfg.warm_start->theta;
    est.d = cfg.warm_start->d;
  } else {
    Vector mean = Vector::Zero(p);
    for (Index k = 0; k < n; ++k) {
      if (k == skip_a || k == skip_b) continue;
      mean += X.row(k).transpose();
    }
    mean /= static_cast<double>(m);
    Vector var = Vector::Zero(p);
    Vector colmin = Vector::Constant(p, std::numeric_limits<double>::infinity());
    Vector colmax = Vector::Constant(p, -std::numeric_limits<double>::infinity());
    for (Index k = 0; k < n; ++k) {
      if (k == skip_a || k == skip_b) continue;
      Eigen::ArrayXd c = X.row(k).transpose().array() - mean.array();
      var.array() += c * c;
      colmin = colmin.cwiseMin(X.row(k).transpose());
      colmax = colmax.cwiseMax(X.row(k).transpose());
    }
    for (Index j = 0; j < p; ++j) {
      if (colmin[j] == colmax[j])
        throw initialization_error("hr_estimate: column " + std::to_string(j) +
                                   " is constant; moment initialization failed");
    }
    var /= static_cast<double>(m - 1);
    est.theta = mean;
    est.d = var;
  }

  const double pd = static_cast<double>(p);
  const double md = static_cast<double>(m);
  Eigen::ArrayXd inv_sd(p), e(p), sign_sum(p), sq_sum(p);

  for (int it = 0;; ++it) {
    inv_sd = est.d.array().sqrt().inverse();
    sign_sum.setZero();
    sq_sum.setZero();
    double sum_inv_r = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (k == skip_a || k == skip_b) continue;
      e = (X.row(k).transpose().array() - est.theta.array()) * inv_sd;
      const double nrm2 = e.matrix().squaredNorm();
      if (!(nrm2 >= kNormFloor * kNormFloor))
        throw degenerate_sample_error(
            "hr_estimate: observation " + std::to_string(k) +
            " coincides with the current center (zero residual)");
      const double inv_r = 1.0 / std::sqrt(nrm2);
      sign_sum += e * inv_r;
      sq_sum += e * e * (inv_r * inv_r);
      sum_inv_r += inv_r;
    }

    est.iterations = it;
    est.residual_location = std::sqrt((sign_sum * sign_sum).sum()) / md;
    est.residual_scale = (pd * (sq_sum / md) - 1.0).abs().maxCoeff();
    if (est.residual_location <= cfg.tol_loc &&
        est.residual_scale <= cfg.tol_scale) {
      est.converged = true;
      return est;
    }
    if (it == cfg.max_iter) {
      est.converged = false;
      return est;
    }

    // (ii) theta <- theta + D^{1/2} sum U(eps) / sum ||eps||^{-1}
    est.theta.array() += est.d.array().sqrt() * sign_sum / sum_inv_r;
    // (iii) D <- p D^{1/2} diag{n^{-1} sum U U^T} D^{1/2}
    est.d.array() *= pd * sq_sum / md;
  }
}

}  // namespace detail

// Solve the simultaneous estimating equations by the three-step recursion,
// iterating until both residuals fall below tolerance or max_iter is reached
// (the returned estimate then carries converged = false rather than throwing).
inline HREstimate hr_estimate(const DataMatrix& X, const SolverConfig& cfg = {}) {
  return detail::hr_solve(X, -1, -1, cfg);
}

// hr_estimate on X with the two indexed rows removed.
inline HREstimate hr_estimate_leave_out(const DataMatrix& X, Index drop_i,
                                        Index drop_j,
                                        const SolverConfig& cfg = {}) {
  const Index n = X.rows();
  if (drop_i < 0 || drop_j < 0 || drop_i >= n || drop_j >= n || drop_i == drop_j)
    throw invalid_input_error("hr_estimate_leave_out: bad row pair");
  if (n - 2 < 2)
    throw sample_too_small_error(
        "hr_estimate_leave_out: need at least 2 rows after removal");
  return detail::hr_solve(X, drop_i, drop_j, cfg);
}

}  // namespace sstest
