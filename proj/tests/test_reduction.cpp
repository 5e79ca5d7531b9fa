#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "bhscat/errors.hpp"
#include "bhscat/reduction.hpp"
#include "synthetic.hpp"

using namespace bhscat;
using namespace bhscat::reduction;

namespace {
std::shared_ptr<geometry::ReggeWheelerMap> cosmo_map() {
  return std::make_shared<geometry::ReggeWheelerMap>(testutil::bh_cosmo());
}
}  // namespace

TEST_CASE("charge-term limits are q Q / r at the horizons") {
  auto map = cosmo_map();
  PotentialProfile prof(map, testutil::field_cosmo(), 1);
  const auto& hz = map->horizons();
  CHECK(prof.c0() == doctest::Approx(1.0 * 0.5 / hz.r_0).epsilon(1e-12));
  CHECK(prof.cplus() == doctest::Approx(1.0 * 0.5 / hz.r_plus).epsilon(1e-12));
  CHECK(prof.c(-200.0) == doctest::Approx(prof.c0()).epsilon(1e-8));
  CHECK(prof.c(400.0) == doctest::Approx(prof.cplus()).epsilon(1e-8));
}

TEST_CASE("phase integral beta matches its frozen value") {
  auto map = cosmo_map();
  PotentialProfile prof(map, testutil::field_cosmo(), 1);
  CHECK(prof.beta() == doctest::Approx(-0.67472129).epsilon(1e-6));
  // beta is a property of c alone, so it cannot depend on the weight
  PotentialProfile prof3(map, testutil::field_cosmo(), 3);
  CHECK(prof3.beta() == doctest::Approx(prof.beta()).epsilon(1e-10));
}

TEST_CASE("C_minus has slope c0 far left and its derivative is c") {
  auto map = cosmo_map();
  PotentialProfile prof(map, testutil::field_cosmo(), 1);
  double h = 1e-4;
  for (double x : {-30.0, -2.0, 0.0, 3.0, 40.0}) {
    double deriv = (prof.C_minus(x + h) - prof.C_minus(x - h)) / (2 * h);
    CHECK(deriv == doctest::Approx(prof.c(x)).epsilon(1e-6));
  }
  double slope_far = (prof.C_minus(-100.0) - prof.C_minus(-120.0)) / 20.0;
  CHECK(slope_far == doctest::Approx(prof.c0()).epsilon(1e-8));
}

TEST_CASE("reduced potential block satisfies k k^* = W^2 I") {
  auto map = cosmo_map();
  PotentialProfile prof(map, testutil::field_cosmo(), 2);
  for (double x : {-20.0, -1.0, 0.5, 10.0}) {
    Mat2 kk = prof.k(x) * prof.k(x).adjoint();
    double W2 = prof.W2(x);
    CHECK(std::abs(kk(0, 0) - W2) < 1e-12 * (1 + W2));
    CHECK(std::abs(kk(1, 1) - W2) < 1e-12 * (1 + W2));
    CHECK(std::abs(kk(0, 1)) < 1e-12);
    CHECK(std::abs(kk(1, 0)) < 1e-12);
  }
}

TEST_CASE("closed-form W^2 integrals match quadrature on both examples") {
  auto map = cosmo_map();
  for (int w : {1, 2, 3}) {
    PotentialProfile prof(map, testutil::field_cosmo(), w);
    double closed = w2_integral_closed_dS(map->horizons(), testutil::field_cosmo(), w);
    CHECK(w2_integral_quadrature(prof) == doctest::Approx(closed).epsilon(1e-8));
  }
  // second parameter set
  geometry::BlackHoleParams bh2{2.0, 1.2, 0.01};
  auto map2 = std::make_shared<geometry::ReggeWheelerMap>(bh2);
  FieldParams f2{0.15, 0.7};
  for (int w : {1, 2}) {
    PotentialProfile prof(map2, f2, w);
    double closed = w2_integral_closed_dS(map2->horizons(), f2, w);
    CHECK(w2_integral_quadrature(prof) == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("frozen W^2 integral values for the cosmological example") {
  auto map = cosmo_map();
  PotentialProfile p1(map, testutil::field_cosmo(), 1);
  PotentialProfile p2(map, testutil::field_cosmo(), 2);
  CHECK(w2_integral_quadrature(p1) == doctest::Approx(0.5206639295).epsilon(1e-8));
  CHECK(w2_integral_quadrature(p2) == doctest::Approx(1.54819923).epsilon(1e-7));
}

TEST_CASE("flat-regime expansion integrals match quadrature") {
  auto bh = testutil::bh_flat();
  auto map = std::make_shared<geometry::ReggeWheelerMap>(bh);
  auto f = testutil::field_flat();
  for (int w : {1, 2}) {
    PotentialProfile prof(map, f, w);
    auto closed = rn_integrals_closed(map->horizons(), f, w, bh);
    auto quadr = rn_integrals_quadrature(prof);
    CHECK(quadr.int_a2 == doctest::Approx(closed.int_a2).epsilon(1e-6));
    CHECK(quadr.int_b2_left == doctest::Approx(closed.int_b2_left).epsilon(1e-6));
    CHECK(quadr.int_bm2_right == doctest::Approx(closed.int_bm2_right).epsilon(1e-6));
    CHECK(closed.int_a2 == doctest::Approx(w * w / 9.0).epsilon(1e-12));
  }
}

TEST_CASE("sampled grid covers the potential and keeps the factorization") {
  auto map = cosmo_map();
  PotentialProfile prof(map, testutil::field_cosmo(), 1);
  auto g = build_kgrid(prof, 0.05, 1e-12);
  CHECK((int)g.a.size() == 2 * g.n_steps + 1);
  CHECK(g.x_lo < -100.0);
  CHECK(g.x_hi > 200.0);
  // neglected tails are below the requested tolerance
  CHECK(g.W_at(0) < 1e-10);
  CHECK(g.W_at(2 * g.n_steps) < 1e-10);
  // samples agree with the profile
  int mid = g.n_steps;  // grid midpoint (half-index = n_steps means x mid? use x_at)
  double x = g.x_at(mid);
  CHECK(g.a[mid] == doctest::Approx(prof.a_w(x)).epsilon(1e-12));
  CHECK(g.b[mid] == doctest::Approx(prof.b(x)).epsilon(1e-12));
  Mat2 kk = g.k_at(mid) * g.k_at(mid).adjoint();
  CHECK(std::abs(kk(0, 1)) < 1e-12);
}

TEST_CASE("field parameter validation") {
  CHECK_THROWS_AS(FieldParams({-0.1, 1.0}).validate(), bhscat::ConfigError);
}
