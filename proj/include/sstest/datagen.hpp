#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "sstest/common.hpp"
#include "sstest/errors.hpp"
#include "sstest/rng.hpp"

namespace sstest {

enum class Family { Normal, StudentT, MixtureNormal };

struct FamilySpec {
  Family kind = Family::Normal;
  double df = 4.0;         // StudentT degrees of freedom (> 2)
  double gamma = 0.8;      // MixtureNormal weight of the unit component
  double inflation = 9.0;  // MixtureNormal covariance multiplier
};

enum class ScatterKind { AR1, ScaledAR1 };

// AR1: Sigma_ij = rho^|i-j|. ScaledAR1: Sigma = D^{1/2} R D^{1/2} with
// R = AR1(rho) and scale d_low on the first half of the coordinates, d_high
// on the second half (so the diagonal carries the squared scales).
struct ScatterSpec {
  ScatterKind kind = ScatterKind::AR1;
  double rho = 0.5;
  double d_low = 1.0;
  double d_high = 3.0;
};

enum class SignalKind { Null, SparseEqual };

// SparseEqual places kappa on the first s coordinates, zero elsewhere.
struct SignalSpec {
  SignalKind kind = SignalKind::Null;
  Index s = 0;
  double kappa = 0.0;
};

struct Scenario {
  std::string id;  // optional label; generated from the fields when empty
  FamilySpec family;
  Index n = 0;
  Index p = 0;
  ScatterSpec scatter;
  SignalSpec signal;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 4 || p < 3)
      throw invalid_spec_error("scenario: requires n >= 4 and p >= 3");
    if (family.kind == Family::StudentT && !(family.df > 2.0))
      throw invalid_spec_error("scenario: StudentT needs df > 2");
    if (family.kind == Family::MixtureNormal) {
      if (!(family.gamma > 0.0 && family.gamma < 1.0))
        throw invalid_spec_error("scenario: mixture gamma must lie in (0,1)");
      if (!(family.inflation > 0.0))
        throw invalid_spec_error("scenario: mixture inflation must be positive");
    }
    if (!(std::abs(scatter.rho) < 1.0))
      throw invalid_spec_error("scenario: |rho| must be < 1");
    if (scatter.kind == ScatterKind::ScaledAR1 &&
        (!(scatter.d_low > 0.0) || !(scatter.d_high > 0.0)))
      throw invalid_spec_error("scenario: scatter scales must be positive");
    if (signal.kind == SignalKind::SparseEqual) {
      if (signal.s < 0 || signal.s > p)
        throw invalid_spec_error("scenario: signal sparsity must satisfy 0 <= s <= p");
      if (signal.kappa < 0.0)
        throw invalid_spec_error("scenario: signal magnitude must be nonnegative");
    }
  }
};

struct ScatterMatrices {
  Matrix sigma;         // p x p, symmetric positive definite
  Matrix gamma_factor;  // symmetric PSD square root: gamma * gamma' = sigma
};

// Builds Sigma and its symmetric square root via eigendecomposition.
inline ScatterMatrices make_scatter(const ScatterSpec& spec, Index p) {
  if (p < 2) throw invalid_spec_error("make_scatter: requires p >= 2");
  if (!(std::abs(spec.rho) < 1.0))
    throw invalid_spec_error("make_scatter: |rho| must be < 1");
  if (spec.kind == ScatterKind::ScaledAR1 &&
      (!(spec.d_low > 0.0) || !(spec.d_high > 0.0)))
    throw invalid_spec_error("make_scatter: scales must be positive");

  ScatterMatrices out;
  out.sigma.resize(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      out.sigma(i, j) = std::pow(spec.rho, std::abs(static_cast<double>(i - j)));
  if (spec.kind == ScatterKind::ScaledAR1) {
    Vector scale(p);
    for (Index i = 0; i < p; ++i)
      scale[i] = (i < p / 2) ? spec.d_low : spec.d_high;
    out.sigma = scale.asDiagonal() * out.sigma * scale.asDiagonal();
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.sigma);
  const Vector sqrt_ev = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  out.gamma_factor =
      eig.eigenvectors() * sqrt_ev.asDiagonal() * eig.eigenvectors().transpose();
  return out;
}

inline Vector make_signal(const SignalSpec& spec, Index p) {
  Vector theta = Vector::Zero(p);
  if (spec.kind == SignalKind::SparseEqual)
    for (Index j = 0; j < spec.s && j < p; ++j) theta[j] = spec.kappa;
  return theta;
}

// --- composable draw steps (the sample() stream consumes them in this order) ---

inline DataMatrix draw_standard_normal(Rng& rng, Index n, Index p) {
  DataMatrix Z(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) Z(i, j) = rng.normal();
  return Z;
}

// Radial factor v_i of the elliptical form X_i = theta + v_i * Gamma W_i:
// 1 for Normal, sqrt(df / chi2_df) for StudentT, and sqrt(inflation) with
// probability 1 - gamma for the mixture.
inline Vector draw_radial_factors(Rng& rng, const FamilySpec& family, Index n) {
  Vector v = Vector::Ones(n);
  switch (family.kind) {
    case Family::Normal:
      break;
    case Family::StudentT:
      for (Index i = 0; i < n; ++i)
        v[i] = std::sqrt(family.df / rng.chi_square(family.df));
      break;
    case Family::MixtureNormal:
      for (Index i = 0; i < n; ++i)
        v[i] = (rng.uniform() < family.gamma) ? 1.0 : std::sqrt(family.inflation);
      break;
  }
  return v;
}

inline DataMatrix compose_sample(const Vector& theta, const Matrix& gamma_factor,
                                 const Vector& v, const DataMatrix& z) {
  DataMatrix X = z * gamma_factor.transpose();
  for (Index i = 0; i < X.rows(); ++i)
    X.row(i) = (v[i] * X.row(i).transpose() + theta).transpose();
  return X;
}

// One replication of the scenario; pure function of (scenario, replication).
inline DataMatrix sample_with(const Scenario& sc, const ScatterMatrices& scatter,
                              std::uint64_t replication = 0) {
  sc.validate();
  Rng rng = substream(sc.seed, replication);
  const DataMatrix z = draw_standard_normal(rng, sc.n, sc.p);
  const Vector v = draw_radial_factors(rng, sc.family, sc.n);
  return compose_sample(make_signal(sc.signal, sc.p), scatter.gamma_factor, v, z);
}

inline DataMatrix sample(const Scenario& sc, std::uint64_t replication = 0) {
  sc.validate();
  return sample_with(sc, make_scatter(sc.scatter, sc.p), replication);
}

}  // namespace sstest
