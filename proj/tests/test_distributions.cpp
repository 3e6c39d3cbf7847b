#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sstest/distributions.hpp"

using namespace sstest;

TEST_CASE("gumbel cdf limits and fixed values", "[distributions]") {
  CHECK(gumbel_cdf(200.0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(gumbel_cdf(-200.0) == Catch::Approx(0.0).margin(1e-15));
  // exp(-1/sqrt(pi))
  CHECK(gumbel_cdf(0.0) ==
        Catch::Approx(0.5688209418640202).margin(1e-12));
  // strictly increasing
  double prev = 0.0;
  for (double x = -10.0; x <= 20.0; x += 0.5) {
    const double v = gumbel_cdf(x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("gumbel quantile closed form", "[distributions]") {
  // -log(pi) - 2 log log(1/level)
  CHECK(gumbel_quantile(0.95) ==
        Catch::Approx(4.795660612234929).margin(1e-12));
  CHECK(gumbel_quantile(0.99) ==
        Catch::Approx(8.055568567703760).margin(1e-12));
  CHECK(std::abs(gumbel_quantile(0.95) - 4.79571) < 1e-4);

  for (double level : {0.01, 0.1, 0.3, 0.5, 0.9, 0.95, 0.99, 0.999})
    CHECK(gumbel_cdf(gumbel_quantile(level)) ==
          Catch::Approx(level).margin(1e-12));

  CHECK_THROWS_AS(gumbel_quantile(0.0), invalid_level_error);
  CHECK_THROWS_AS(gumbel_quantile(1.0), invalid_level_error);
  CHECK_THROWS_AS(gumbel_quantile(-0.2), invalid_level_error);
  CHECK_THROWS_AS(gumbel_quantile(1.7), invalid_level_error);
}

TEST_CASE("normal cdf accuracy and symmetry", "[distributions]") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959964) == Catch::Approx(0.975).margin(1e-6));
  CHECK(normal_cdf(1.0) == Catch::Approx(0.8413447460685429).margin(1e-12));
  CHECK(normal_cdf(3.0) == Catch::Approx(0.9986501019683699).margin(1e-12));
  CHECK(normal_cdf(-5.0) ==
        Catch::Approx(2.866515718791939e-7).epsilon(1e-9));
  for (double x : {0.5, 1.0, 3.0})
    CHECK(normal_cdf(-x) == Catch::Approx(1.0 - normal_cdf(x)).margin(1e-14));
}
