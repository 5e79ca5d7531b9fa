#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "bhscat/asymptotics.hpp"
#include "bhscat/errors.hpp"
#include "bhscat/recovery.hpp"
#include "synthetic.hpp"

using namespace bhscat;
using namespace bhscat::recovery;

TEST_CASE("phase slope extraction on synthetic unimodular samples") {
  std::vector<double> x;
  std::vector<cplx> th;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(0.3 * i);
    th.push_back(std::exp(I_UNIT * (0.4 + 1.9 * x.back())));
  }
  double resid = 0;
  CHECK(extract_phase_slope(x, th, &resid) == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(resid < 1e-12);
  // wrapping across many branches is handled
  for (size_t i = 0; i < x.size(); ++i) th[i] = std::exp(I_UNIT * (8.0 * x[i]));
  CHECK(extract_phase_slope(x, th, &resid, 1e-6) == doctest::Approx(8.0).epsilon(1e-10));
  // a quadratic phase is rejected as non-affine
  for (size_t i = 0; i < x.size(); ++i) th[i] = std::exp(I_UNIT * (0.5 * x[i] * x[i]));
  CHECK_THROWS_AS(extract_phase_slope(x, th, nullptr, 1e-6), bhscat::QualityError);
}

TEST_CASE("weight fit splits w^2 and mass contributions") {
  std::vector<int> weights{1, 2, 3};
  double Y = 0.342, Z = 4.45, m = 0.2;
  std::vector<double> ints;
  for (int w : weights) ints.push_back(w * w * Y + m * m * Z);
  double Yr, Zr;
  extract_w_integrals_dS(weights, ints, m, Yr, Zr);
  CHECK(Yr == doctest::Approx(Y).epsilon(1e-12));
  CHECK(Zr == doctest::Approx(Z).epsilon(1e-12));
  CHECK_THROWS_AS(extract_w_integrals_dS(weights, ints, 0.0, Yr, Zr), bhscat::ConfigError);
}

TEST_CASE("algebraic parameter recovery inverts the closed forms exactly") {
  auto bh = testutil::bh_cosmo();
  auto hz = geometry::horizon_data(bh);
  double q = 1.0;
  double Y = (hz.r_plus - hz.r_0) / (hz.r_0 * hz.r_plus);
  double Z = hz.r_plus - hz.r_0;
  double X = q * bh.Q * Y;
  auto rep = recover_parameters_dS(X, Y, Z, q);
  CHECK(rep.M == doctest::Approx(bh.M).epsilon(1e-12));
  CHECK(rep.Q == doctest::Approx(bh.Q).epsilon(1e-12));
  CHECK(rep.Lambda == doctest::Approx(bh.Lambda).epsilon(1e-12));
  CHECK(rep.r0 == doctest::Approx(hz.r_0).epsilon(1e-12));
  CHECK(rep.rplus == doctest::Approx(hz.r_plus).epsilon(1e-12));
  CHECK(rep.cond > 1.0);
  CHECK(rep.residual_F0 < 1e-14);
  // degenerate input is flagged, not silently inverted
  CHECK_THROWS_AS(recover_parameters_dS(X, -1e-3, Z, q), bhscat::QualityError);
}

TEST_CASE("flat-regime algebra recovers mass and charge from c0 and r0") {
  auto rep = recover_parameters_RN(1.0 * 3.0 / 9.0, 9.0, 1.0);
  CHECK(rep.M == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rep.Q == doctest::Approx(3.0).epsilon(1e-12));
  // extremal configuration (r0 = |Q| forces M = |Q|) is rejected
  CHECK_THROWS_AS(recover_parameters_RN(1.0, 1.0, 1.0), bhscat::QualityError);
}

TEST_CASE("inverse-power fit reproduces exact series coefficients") {
  std::vector<double> lambdas{20, 40, 80, 160};
  cplx c0(0.3, -0.2), c1(1.1, 0.4), c2(-0.6, 0.9), c3(0.2, 0.1);
  std::vector<cplx> vals;
  for (double l : lambdas)
    vals.push_back(c0 + c1 / l + c2 / (l * l) + c3 / (l * l * l));
  std::vector<cplx> coeffs;
  fit_inverse_powers(lambdas, vals, coeffs);
  CHECK(std::abs(coeffs[0] - c0) < 1e-10);
  CHECK(std::abs(coeffs[1] - c1) < 1e-8);
}

TEST_CASE("flat-regime pipeline from analytic reconstruction data is exact") {
  auto map = std::make_shared<geometry::ReggeWheelerMap>(testutil::bh_flat());
  auto f = testutil::field_flat();
  std::vector<int> weights{1, 2};
  std::vector<double> x;
  for (int i = 0; i <= 40; ++i) x.push_back(-2.0 + 0.1 * i);
  std::vector<cplx> theta;
  std::vector<std::vector<cplx>> A;
  for (int w : weights) {
    reduction::PotentialProfile prof(map, f, w);
    auto pair = asymptotics::reconstruction_pair(prof);
    std::vector<cplx> Aw;
    for (double xv : x) Aw.push_back(pair.A(xv));
    A.push_back(std::move(Aw));
    if (theta.empty())
      for (double xv : x) theta.push_back(pair.Theta(xv));
  }
  auto rep = pipeline_RN(x, theta, weights, A, f.charge);
  CHECK(rep.M == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(rep.Q == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::sqrt(rep.m2) == doctest::Approx(f.mass).epsilon(1e-8));
  // feeding cosmological-style data into the flat pipeline is rejected:
  // a Theta with the wrong structure makes A/Theta non-affine
  std::vector<std::vector<cplx>> bad = A;
  for (auto& row : bad)
    for (size_t i = 0; i < row.size(); ++i) row[i] *= std::exp(I_UNIT * x[i] * x[i]);
  CHECK_THROWS_AS(pipeline_RN(x, theta, weights, bad, f.charge), bhscat::QualityError);
}

TEST_CASE("cosmological pipeline needs at least two weights") {
  CHECK_THROWS_AS(pipeline_dS({}, 0.2, 1.0), bhscat::ConfigError);
}
