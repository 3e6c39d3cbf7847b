#pragma once

#include <cmath>

#include "sstest/errors.hpp"

namespace sstest {

// Limiting null law of the normalized max statistic: a Type I extreme value
// distribution with cdf F(x) = exp(-pi^{-1/2} e^{-x/2}).
inline double gumbel_cdf(double x) {
  if (std::isnan(x)) throw invalid_input_error("gumbel_cdf: NaN input");
  return std::exp(-std::exp(-x / 2.0) / std::sqrt(M_PI));
}

// Inverse of gumbel_cdf: q(level) = -log(pi) - 2 log log(1/level).
inline double gumbel_quantile(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw invalid_level_error("gumbel_quantile: level must lie in (0,1)");
  return -std::log(M_PI) - 2.0 * std::log(std::log(1.0 / level));
}

// Standard normal cdf via erfc; absolute accuracy well below 1e-12.
inline double normal_cdf(double x) {
  if (std::isnan(x)) throw invalid_input_error("normal_cdf: NaN input");
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Standard Cauchy cdf, used by the p-value combination.
inline double cauchy_cdf(double x) { return 0.5 + std::atan(x) / M_PI; }

}  // namespace sstest
