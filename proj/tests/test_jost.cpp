#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "bhscat/errors.hpp"
#include "bhscat/jost.hpp"
#include "bhscat/reduction.hpp"
#include "synthetic.hpp"

using namespace bhscat;
using namespace bhscat::jost;

namespace {
reduction::KGrid cosmo_grid(int w = 1) {
  auto map = std::make_shared<geometry::ReggeWheelerMap>(testutil::bh_cosmo());
  reduction::PotentialProfile prof(map, testutil::field_cosmo(), w);
  return reduction::build_kgrid(prof, 0.05, 1e-12);
}
}  // namespace

TEST_CASE("transition matrices satisfy a_l a_r = I") {
  auto g = testutil::synth_grid(0.4, 0.25, 0.3);
  for (double xi : {0.3, 1.0, 4.0, 25.0, 150.0}) {
    auto tc = transition_coefficients(g, xi);
    CHECK(tc.product_defect < 1e-10);
  }
}

TEST_CASE("scattering matrix is unitary and both block formulas agree") {
  auto g = cosmo_grid();
  for (double xi : {-8.0, -1.3, 0.05, 0.7, 2.0, 10.0}) {
    auto s = scattering_matrix(g, xi);
    CHECK(s.unitarity_defect < 1e-10);
    CHECK(s.formula_mismatch < 1e-10);
  }
}

TEST_CASE("propagation error is second order in the step") {
  // Richardson: halving the step shrinks a block error ~4x; compare against
  // the extrapolated finest value.
  auto make = [&](double step) {
    auto g = testutil::synth_grid(0.4, 0.25, 0.3, 12.0, step);
    return scattering_matrix(g, 1.7).R;
  };
  Mat2 r1 = make(0.16), r2 = make(0.08), r3 = make(0.04);
  double d12 = (r1 - r2).frobenius();
  double d23 = (r2 - r3).frobenius();
  CHECK(d12 / d23 > 3.0);
  CHECK(d12 / d23 < 7.0);
}

TEST_CASE("independent fixed-point solver reproduces the left transition blocks") {
  // The two solvers discretize differently, so they agree up to a combined
  // O(step^2) term that must shrink under refinement.
  auto gap = [](double step, double xi) {
    auto g = testutil::synth_grid(0.4, 0.25, 0.3, 12.0, step);
    auto tc = transition_coefficients(g, xi);
    auto fp = faddeev_fixed_point(g, xi);
    CHECK(fp.residual < 1e-12);
    return (fp.al1 - tc.al1).frobenius() + (fp.al2 - tc.al2).frobenius();
  };
  for (double xi : {0.8, 3.0}) {
    double coarse = gap(0.02, xi);
    CHECK(coarse < 2e-4);
    CHECK(gap(0.01, xi) < coarse / 2.5);
  }
}

TEST_CASE("high-energy limit: S approaches the identity monotonically") {
  auto g = cosmo_grid();
  auto dist = [&](double xi) {
    auto s = scattering_matrix(g, xi);
    return testutil::block4_opnorm(Block4{s.TL, s.R, s.L, s.TR} - Block4::identity());
  };
  double prev = dist(5.0);
  for (double xi : {8.0, 12.0, 20.0, 35.0, 50.0}) {
    double d = dist(xi);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(dist(50.0) < 1e-2);
  CHECK(dist(-50.0) < 1e-2);
}

TEST_CASE("transmission leading correction carries the W^2 integral") {
  // || T_L(xi) - I || ~ (1/2|xi|) int W^2 at large xi
  auto g = testutil::synth_grid(0.4, 0.25, 0.0);
  double iw = 0;
  for (int i = 0; i + 2 <= 2 * g.n_steps; i += 2)
    iw += 0.5 * g.step *
          (g.W_at(i) * g.W_at(i) + g.W_at(i + 2) * g.W_at(i + 2));
  double xi = 300.0;
  auto s = scattering_matrix(g, xi);
  double coeff = (s.TL - Mat2::identity()).frobenius() * xi / std::sqrt(2.0);
  CHECK(coeff == doctest::Approx(0.5 * iw).epsilon(2e-2));
}

TEST_CASE("dressing rotates the blocks by the phase constants") {
  auto g = cosmo_grid();
  auto s = scattering_matrix(g, 1.0);
  double beta = -0.67472129;
  auto d = dress(s, beta);
  CHECK((d.TL - s.TL * std::exp(-I_UNIT * beta)).frobenius() < 1e-14);
  CHECK((d.TR - s.TR * std::exp(-I_UNIT * beta)).frobenius() < 1e-14);
  CHECK((d.R - s.R * std::exp(-2.0 * I_UNIT * beta)).frobenius() < 1e-14);
  CHECK((d.L - s.L).frobenius() == 0.0);
  CHECK(d.unitarity_defect == s.unitarity_defect);
}

TEST_CASE("zero potential gives the identity scattering matrix") {
  auto g = testutil::zero_grid();
  for (double xi : {-3.0, 0.2, 7.0}) {
    auto s = scattering_matrix(g, xi);
    CHECK((s.TL - Mat2::identity()).frobenius() < 1e-13);
    CHECK((s.TR - Mat2::identity()).frobenius() < 1e-13);
    CHECK(s.R.frobenius() < 1e-13);
    CHECK(s.L.frobenius() < 1e-13);
  }
}
