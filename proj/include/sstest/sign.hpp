#pragma once

#include <cmath>

#include "sstest/common.hpp"
#include "sstest/errors.hpp"

namespace sstest {

// Spatial sign U(x) = x/||x|| for x != 0, the zero vector otherwise.
inline Vector spatial_sign(const Vector& x) {
  if (!x.allFinite()) throw invalid_input_error("spatial_sign: non-finite input");
  const double nrm = x.norm();
  if (nrm < kNormFloor) return Vector::Zero(x.size());
  return x / nrm;
}

// Row-wise spatial signs and radii of the scaled centered sample:
// signs.row(i) = U(D^{-1/2}(X_i - theta)), radii[i] = ||D^{-1/2}(X_i - theta)||,
// where D = diag(d) holds the squared scales.
struct SignDecomposition {
  DataMatrix signs;  // n x p, rows of norm 1 (or exactly zero)
  Vector radii;      // n, nonnegative; zero iff the sign row is zero
};

inline SignDecomposition decompose(const DataMatrix& X, const Vector& theta,
                                   const Vector& d) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (theta.size() != p || d.size() != p)
    throw invalid_input_error("decompose: dimension mismatch");
  if ((d.array() <= 0.0).any())
    throw invalid_scale_error("decompose: scale entries must be strictly positive");

  const Eigen::ArrayXd inv_sd = d.array().sqrt().inverse();
  SignDecomposition out;
  out.signs.resize(n, p);
  out.radii.resize(n);
  for (Index i = 0; i < n; ++i) {
    Eigen::ArrayXd e = (X.row(i).transpose().array() - theta.array()) * inv_sd;
    const double r = std::sqrt((e * e).sum());
    if (r < kNormFloor) {
      out.signs.row(i).setZero();
      out.radii[i] = 0.0;
    } else {
      out.signs.row(i) = (e / r).matrix().transpose();
      out.radii[i] = r;
    }
  }
  return out;
}

// First inverse moment estimator: the mean of reciprocal radii.
inline double zeta1_hat(const Vector& radii) {
  if (radii.size() == 0) throw invalid_input_error("zeta1_hat: empty radii");
  double acc = 0.0;
  for (Index i = 0; i < radii.size(); ++i) {
    if (radii[i] < kNormFloor)
      throw degenerate_sample_error(
          "zeta1_hat: zero radius (observation coincides with the center)");
    acc += 1.0 / radii[i];
  }
  return acc / static_cast<double>(radii.size());
}

}  // namespace sstest
