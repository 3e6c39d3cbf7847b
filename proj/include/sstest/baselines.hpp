#pragma once

#include <cmath>
#include <string>

#include "sstest/combo_test.hpp"
#include "sstest/common.hpp"
#include "sstest/distributions.hpp"
#include "sstest/errors.hpp"

namespace sstest {

enum class BaselineMethod { CLXMax, SrivastavaSum, NormalCombo };

struct BaselineOutcome {
  double statistic = 0.0;
  double p_value = 1.0;
  BaselineMethod method = BaselineMethod::CLXMax;
};

namespace detail {

struct ColumnMoments {
  Vector mean;
  Vector var;  // sample variance, denominator n-1
};

inline ColumnMoments column_moments(const DataMatrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  ColumnMoments out;
  out.mean = Vector::Zero(p);
  for (Index k = 0; k < n; ++k) out.mean += X.row(k).transpose();
  out.mean /= static_cast<double>(n);
  out.var = Vector::Zero(p);
  for (Index k = 0; k < n; ++k) {
    Eigen::ArrayXd c = X.row(k).transpose().array() - out.mean.array();
    out.var.array() += c * c;
  }
  out.var /= static_cast<double>(n - 1);
  for (Index j = 0; j < p; ++j)
    if (!(out.var[j] > 0.0))
      throw degenerate_column_error("column " + std::to_string(j) +
                                    " has zero sample variance");
  return out;
}

}  // namespace detail

// Max of studentized column means, Gumbel-calibrated like the max-type test.
inline BaselineOutcome clx_max_test(const DataMatrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (n < 2) throw sample_too_small_error("clx_max_test: requires n >= 2");
  if (p < 3) throw dimension_too_small_error("clx_max_test: requires p >= 3");
  const auto mom = detail::column_moments(X);

  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  BaselineOutcome out;
  out.method = BaselineMethod::CLXMax;
  out.statistic = (nd * mom.mean.array().square() / mom.var.array()).maxCoeff();
  out.p_value = 1.0 - gumbel_cdf(out.statistic - 2.0 * std::log(pd) +
                                 std::log(std::log(pd)));
  return out;
}

// Scalar-invariant sum of studentized means in the 2009 form:
//   [ n xbar' D_S^{-1} xbar - np/(n-2) ] / sqrt( 2 (tr(Rhat^2) - p^2/(n-1)) c_{p,n} )
// with Rhat the sample correlation matrix and c_{p,n} = 1 + tr(Rhat^2) p^{-3/2};
// one-sided normal p-value.
inline BaselineOutcome srivastava_sum_test(const DataMatrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (n < 4) throw sample_too_small_error("srivastava_sum_test: requires n >= 4");
  if (p < 2) throw dimension_too_small_error("srivastava_sum_test: requires p >= 2");
  const auto mom = detail::column_moments(X);

  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  const double q = nd * (mom.mean.array().square() / mom.var.array()).sum();

  // tr(Rhat^2) = squared Frobenius norm of the sample correlation matrix.
  DataMatrix Z = X;
  const Eigen::ArrayXd inv_sd = mom.var.array().sqrt().inverse();
  for (Index k = 0; k < n; ++k)
    Z.row(k) = ((X.row(k).transpose().array() - mom.mean.array()) * inv_sd)
                   .matrix()
                   .transpose();
  const Matrix corr = (Z.transpose() * Z) / (nd - 1.0);
  const double tr_r2 = corr.squaredNorm();

  const double cpn = 1.0 + tr_r2 / std::pow(pd, 1.5);
  const double var_term = tr_r2 - pd * pd / (nd - 1.0);
  if (!(var_term > 0.0))
    throw degenerate_sample_error(
        "srivastava_sum_test: nonpositive variance estimate");

  BaselineOutcome out;
  out.method = BaselineMethod::SrivastavaSum;
  out.statistic = (q - nd * pd / (nd - 2.0)) / std::sqrt(2.0 * var_term * cpn);
  out.p_value = 1.0 - normal_cdf(out.statistic);
  return out;
}

// Cauchy combination of the two mean-based baselines.
inline BaselineOutcome normal_combo_test(const DataMatrix& X) {
  const BaselineOutcome mx = clx_max_test(X);
  const BaselineOutcome sm = srivastava_sum_test(X);
  const ComboOutcome cc = cauchy_combine(mx.p_value, sm.p_value);
  BaselineOutcome out;
  out.method = BaselineMethod::NormalCombo;
  out.statistic = cc.cauchy_stat;
  out.p_value = cc.p_cc;
  return out;
}

}  // namespace sstest
