#include <doctest.h>

#include <cmath>

#include "thinspec/fitting.hpp"

using namespace thinspec;

TEST_CASE("exact line recovery") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  for (double r : f.residuals) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("power law through log_log_fit") {
  std::vector<double> x = {64, 128, 256, 512};
  std::vector<double> y;
  for (double v : x) y.push_back(7.0 / v);
  const LinearFit f = log_log_fit(x, y);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(std::exp(f.intercept) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("imperfect data has r_squared below one") {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {1.0, 2.2, 2.8, 4.1};
  const LinearFit f = linear_fit(x, y);
  CHECK(f.r_squared < 1.0);
  CHECK(f.r_squared > 0.97);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(linear_fit({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(linear_fit({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(linear_fit({1, 1}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(log_log_fit({0.0, 1.0, 2.0, 4.0}, {1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(log_log_fit({1.0, 2.0, 4.0, 8.0}, {1, 1, -1, 1}), std::invalid_argument);
}
