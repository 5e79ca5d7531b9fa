#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bhscat/errors.hpp"
#include "bhscat/geometry.hpp"
#include "synthetic.hpp"

using namespace bhscat::geometry;

TEST_CASE("flat-regime horizons match the closed form") {
  // r_0 = M + sqrt(M^2 - Q^2), r_- = M - sqrt(M^2 - Q^2)
  auto hz = horizon_data({5.0, 3.0, 0.0});
  CHECK(hz.r_0 == doctest::Approx(9.0).epsilon(1e-13));
  CHECK(hz.r_minus == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::isinf(hz.r_plus));
  CHECK(hz.kappa_plus == 0.0);
  CHECK(hz.kappa_0 == doctest::Approx(0.5 * metric_derivative({5.0, 3.0, 0.0}, 9.0)));
  CHECK(hz.kappa_0 > 0);
}

TEST_CASE("cosmological horizons are roots of F with signed surface gravities") {
  auto bh = testutil::bh_cosmo();
  auto hz = horizon_data(bh);
  CHECK(hz.r_minus < hz.r_0);
  CHECK(hz.r_0 < hz.r_plus);
  for (double r : {hz.r_minus, hz.r_0, hz.r_plus})
    CHECK(std::abs(metric_function(bh, r)) < 1e-12);
  CHECK(hz.kappa_0 == doctest::Approx(0.5 * metric_derivative(bh, hz.r_0)));
  CHECK(hz.kappa_plus == doctest::Approx(0.5 * metric_derivative(bh, hz.r_plus)));
  CHECK(hz.kappa_0 > 0);
  CHECK(hz.kappa_plus < 0);
  // quartic root bookkeeping: the four roots of r^2 F sum to zero
  CHECK(hz.r_neg == doctest::Approx(-(hz.r_minus + hz.r_0 + hz.r_plus)).epsilon(1e-12));
}

TEST_CASE("degenerate or missing exterior is rejected") {
  CHECK_THROWS_AS(horizon_data({-1.0, 0.0, 0.0}), bhscat::ConfigError);
  CHECK_THROWS_AS(horizon_data({1.0, 1.5, 0.0}), bhscat::ConfigError);   // |Q| > M
  CHECK_THROWS_AS(horizon_data({1.0, 0.0, 0.5}), bhscat::ConfigError);   // Lambda too big
}

TEST_CASE("tortoise map inverts and anchors at zero") {
  ReggeWheelerMap map(testutil::bh_cosmo());
  CHECK(std::abs(map.x_of_r(map.r_anchor())) < 1e-12);
  const auto& hz = map.horizons();
  // core region away from the horizon edges: the map and its inverse agree
  for (double f : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    double r = hz.r_0 + f * (hz.r_plus - hz.r_0);
    double x = map.x_of_r(r);
    CHECK(map.r_of_x(x) == doctest::Approx(r).epsilon(1e-10));
  }
  // x is increasing in r
  CHECK(map.x_of_r(hz.r_0 + 0.1) < map.x_of_r(hz.r_0 + 0.2));
}

TEST_CASE("tortoise map in the flat regime grows like r at large radius") {
  ReggeWheelerMap map(testutil::bh_flat());
  double r1 = 100.0, r2 = 200.0;
  double slope = (map.x_of_r(r2) - map.x_of_r(r1)) / (r2 - r1);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(map.r_of_x(map.x_of_r(50.0)) == doctest::Approx(50.0).epsilon(1e-10));
}

TEST_CASE("factored metric matches the polynomial form away from horizons") {
  auto bh = testutil::bh_cosmo();
  ReggeWheelerMap map(bh);
  for (double r = 2.2; r < 6.3; r += 0.5)
    CHECK(map.F(r) == doctest::Approx(metric_function(bh, r)).epsilon(1e-12));
}
