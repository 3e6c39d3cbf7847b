#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "sstest/rng.hpp"
#include "sstest/sign.hpp"

using namespace sstest;

namespace {

DataMatrix random_matrix(Rng& rng, Index n, Index p) {
  DataMatrix X(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
  return X;
}

}  // namespace

TEST_CASE("spatial_sign basics", "[sign]") {
  Vector x(2);
  x << 3.0, 4.0;
  const Vector u = spatial_sign(x);
  CHECK(u[0] == Catch::Approx(0.6).margin(1e-15));
  CHECK(u[1] == Catch::Approx(0.8).margin(1e-15));

  CHECK(spatial_sign(Vector::Zero(3)).isZero(0.0));

  Vector unit(3);
  unit << 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(3.0);
  CHECK((spatial_sign(unit) - unit).lpNorm<Eigen::Infinity>() < 1e-15);

  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spatial_sign(bad), invalid_input_error);
  bad[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(spatial_sign(bad), invalid_input_error);
}

TEST_CASE("spatial_sign unit norm property", "[sign]") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(5);
    for (Index j = 0; j < 5; ++j) x[j] = rng.normal();
    // mix in extreme scales
    const double scale = std::pow(10.0, (trial % 17) - 8);
    const Vector u = spatial_sign(Vector(scale * x));
    CHECK(std::abs(u.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("decompose row semantics", "[sign]") {
  Rng rng(7);
  const DataMatrix X = random_matrix(rng, 5, 3);
  Vector theta = X.row(2).transpose();  // third row centered to zero
  Vector d = Vector::Ones(3);

  const auto dec = decompose(X, theta, d);
  CHECK(dec.radii[2] == 0.0);
  CHECK(dec.signs.row(2).isZero(0.0));
  for (Index i = 0; i < 5; ++i) {
    if (i == 2) continue;
    CHECK(std::abs(dec.signs.row(i).norm() - 1.0) < 1e-12);
    CHECK(dec.radii[i] > 0.0);
  }
}

TEST_CASE("decompose identity scaling equals spatial_sign", "[sign]") {
  Rng rng(11);
  const DataMatrix X = random_matrix(rng, 6, 4);
  const auto dec = decompose(X, Vector::Zero(4), Vector::Ones(4));
  for (Index i = 0; i < 6; ++i) {
    const Vector u = spatial_sign(X.row(i).transpose());
    CHECK((dec.signs.row(i).transpose() - u).lpNorm<Eigen::Infinity>() < 1e-15);
    CHECK(dec.radii[i] == Catch::Approx(X.row(i).norm()).epsilon(1e-15));
  }
}

TEST_CASE("decompose matches per-element brute force", "[sign]") {
  Rng rng(13);
  const DataMatrix X = random_matrix(rng, 4, 3);
  Vector theta(3), d(3);
  for (Index j = 0; j < 3; ++j) {
    theta[j] = rng.normal();
    d[j] = 0.5 + rng.uniform();
  }
  const auto dec = decompose(X, theta, d);
  for (Index i = 0; i < 4; ++i) {
    double nrm2 = 0.0;
    for (Index j = 0; j < 3; ++j) {
      const double e = (X(i, j) - theta[j]) / std::sqrt(d[j]);
      nrm2 += e * e;
    }
    const double r = std::sqrt(nrm2);
    CHECK(dec.radii[i] == Catch::Approx(r).epsilon(1e-14));
    for (Index j = 0; j < 3; ++j) {
      const double e = (X(i, j) - theta[j]) / std::sqrt(d[j]);
      CHECK(dec.signs(i, j) == Catch::Approx(e / r).epsilon(1e-12));
    }
  }
}

TEST_CASE("decompose scale equivariance", "[sign]") {
  Rng rng(17);
  const DataMatrix X = random_matrix(rng, 8, 5);
  Vector theta(5), d(5), c(5);
  for (Index j = 0; j < 5; ++j) {
    theta[j] = rng.normal();
    d[j] = 0.5 + rng.uniform();
    c[j] = 0.1 + 4.0 * rng.uniform();
  }
  DataMatrix Xc = X;
  for (Index j = 0; j < 5; ++j) Xc.col(j) *= c[j];
  const Vector theta_c = theta.cwiseProduct(c);
  const Vector d_c = d.cwiseProduct(c.cwiseProduct(c));

  const auto dec = decompose(X, theta, d);
  const auto dec_c = decompose(Xc, theta_c, d_c);
  CHECK((dec.signs - dec_c.signs).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((dec.radii - dec_c.radii).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("decompose rejects bad scales and shapes", "[sign]") {
  Rng rng(19);
  const DataMatrix X = random_matrix(rng, 4, 3);
  Vector d = Vector::Ones(3);
  d[1] = 0.0;
  CHECK_THROWS_AS(decompose(X, Vector::Zero(3), d), invalid_scale_error);
  d[1] = -1.0;
  CHECK_THROWS_AS(decompose(X, Vector::Zero(3), d), invalid_scale_error);
  CHECK_THROWS_AS(decompose(X, Vector::Zero(4), Vector::Ones(3)),
                  invalid_input_error);
}

TEST_CASE("decompose row permutation equivariance", "[sign]") {
  Rng rng(23);
  const DataMatrix X = random_matrix(rng, 6, 4);
  Vector theta(4), d(4);
  for (Index j = 0; j < 4; ++j) {
    theta[j] = rng.normal();
    d[j] = 1.0 + rng.uniform();
  }
  std::vector<Index> perm = {3, 0, 5, 1, 4, 2};
  DataMatrix Xp(6, 4);
  for (Index i = 0; i < 6; ++i) Xp.row(i) = X.row(perm[i]);

  const auto dec = decompose(X, theta, d);
  const auto dec_p = decompose(Xp, theta, d);
  for (Index i = 0; i < 6; ++i) {
    CHECK(dec_p.radii[i] == dec.radii[perm[i]]);
    CHECK((dec_p.signs.row(i) - dec.signs.row(perm[i])).norm() == 0.0);
  }
}

TEST_CASE("zeta1_hat values and errors", "[sign]") {
  Vector r3 = Vector::Ones(3);
  CHECK(zeta1_hat(r3) == 1.0);

  Vector r(3);
  r << 1.0, 2.0, 4.0;
  CHECK(zeta1_hat(r) == Catch::Approx(0.5833333333333334).margin(1e-15));

  r[1] = 0.0;
  CHECK_THROWS_AS(zeta1_hat(r), degenerate_sample_error);
}

TEST_CASE("zeta1_hat agrees with a fresh-draw oracle", "[sign][statistical]") {
  // radii of standard normal vectors, p = 400: compare the n = 100 estimate
  // against an independent large-sample average of 1/R.
  const Index p = 400;
  Rng rng(2027);
  Vector radii(100);
  for (Index i = 0; i < 100; ++i) {
    double nrm2 = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double z = rng.normal();
      nrm2 += z * z;
    }
    radii[i] = std::sqrt(nrm2);
  }
  const double est = zeta1_hat(radii);

  Rng oracle_rng(5501);
  const int m = 20000;
  double acc = 0.0, acc2 = 0.0;
  for (int i = 0; i < m; ++i) {
    double nrm2 = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double z = oracle_rng.normal();
      nrm2 += z * z;
    }
    const double inv_r = 1.0 / std::sqrt(nrm2);
    acc += inv_r;
    acc2 += inv_r * inv_r;
  }
  const double oracle_mean = acc / m;

  // 3 Monte Carlo SEs of the n = 100 sample mean of 1/R
  const double var = acc2 / m - oracle_mean * oracle_mean;
  const double se = std::sqrt(var / 100.0);
  CHECK(std::abs(est - oracle_mean) <= 3.0 * se);
}
