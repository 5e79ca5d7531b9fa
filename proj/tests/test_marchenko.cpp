#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bhscat/errors.hpp"
#include "bhscat/jost.hpp"
#include "bhscat/marchenko.hpp"
#include "synthetic.hpp"

using namespace bhscat;
using namespace bhscat::marchenko;

namespace {

std::vector<jost::ScatteringMatrix> sweep(const reduction::KGrid& g, double xi_max,
                                          double dxi) {
  std::vector<jost::ScatteringMatrix> tab;
  for (double xi = -xi_max; xi <= xi_max + 1e-12; xi += dxi)
    tab.push_back(jost::scattering_matrix(g, xi));
  return tab;
}

}  // namespace

TEST_CASE("weak-coupling limit pins the kernel conventions") {
  auto g = testutil::synth_grid(0.02, 0.012, 0.05);
  auto kern = fourier_kernels(sweep(g, 8.0, 0.02), 20.0, 0.05);
  for (double x = -3.0; x <= 3.0 + 1e-12; x += 0.5) {
    int hi = (int)std::round((x - g.x_lo) / (0.5 * g.step));
    Mat2 ktrue = g.k_at(hi);
    Mat2 born_r = kern.Rhat_at(2 * x) * (2.0 * I_UNIT);
    Mat2 born_l = (kern.Lhat_at(-2 * x) * (2.0 * I_UNIT)).adjoint();
    CHECK((born_r - ktrue).frobenius() < 1e-4);
    CHECK((born_l - ktrue).frobenius() < 1e-4);
  }
}

TEST_CASE("Plancherel identity between reflection and its kernel") {
  auto g = testutil::synth_grid(0.4, 0.25, 0.3);
  auto tab = sweep(g, 10.0, 0.02);
  auto kern = fourier_kernels(tab, 24.0, 0.05);
  double lhs = 0;
  for (size_t i = 0; i + 1 < tab.size(); ++i) {
    double f0 = tab[i].R.frobenius(), f1 = tab[i + 1].R.frobenius();
    lhs += 0.5 * (f0 * f0 + f1 * f1) * 0.02;
  }
  double rhs = 0;
  for (size_t i = 0; i + 1 < kern.Rhat.size(); ++i) {
    double f0 = kern.Rhat[i].frobenius(), f1 = kern.Rhat[i + 1].frobenius();
    rhs += 0.5 * (f0 * f0 + f1 * f1) * kern.h;
  }
  CHECK(lhs == doctest::Approx(2.0 * M_PI * rhs).epsilon(1e-3));
}

TEST_CASE("kernel construction rejects bad sweeps") {
  auto g = testutil::synth_grid(0.4, 0.25, 0.3);
  auto tab = sweep(g, 10.0, 0.02);
  // aliasing guard: alpha window too wide for the xi spacing
  CHECK_THROWS_AS(fourier_kernels(tab, 1000.0, 0.05), bhscat::ConfigError);
  // edge guard: reflection still large at the window edge
  auto short_tab = sweep(g, 1.0, 0.02);
  CHECK_THROWS_AS(fourier_kernels(short_tab, 10.0, 0.05), bhscat::ConfigError);
  // non-uniform grid
  auto bad = tab;
  bad[3].xi += 1e-3;
  CHECK_THROWS_AS(fourier_kernels(bad, 10.0, 0.05), bhscat::ConfigError);
}

TEST_CASE("solutions round-trip a moderate synthetic potential") {
  auto g = testutil::synth_grid(0.4, 0.25, 0.3);
  auto kern = fourier_kernels(sweep(g, 10.0, 0.02), 24.0, 0.05);
  CHECK(kern.sup_R < 1.0);
  auto rec = recover_k(kern, -5.0, 5.0, 0.25);
  CHECK(rec.branch_mismatch < 1e-4);
  double l1 = 0, l1_true = 0;
  for (size_t i = 0; i < rec.x.size(); ++i) {
    int hi = (int)std::round((rec.x[i] - g.x_lo) / (0.5 * g.step));
    Mat2 ktrue = g.k_at(hi);
    l1 += (rec.k[i] - ktrue).frobenius() * 0.25;
    l1_true += ktrue.frobenius() * 0.25;
    CHECK(rec.W2[i] == doctest::Approx(0.5 * std::pow(rec.k[i].frobenius(), 2))
                           .epsilon(1e-12));
  }
  CHECK(l1 / l1_true < 1e-3);
}

TEST_CASE("decay certificate reports a positive rate and summable tail") {
  auto g = testutil::synth_grid(0.4, 0.25, 0.3);
  auto kern = fourier_kernels(sweep(g, 10.0, 0.02), 24.0, 0.05);
  for (bool left : {false, true}) {
    auto cert = decay_certificate(kern, left);
    CHECK(cert.rate > 0.0);
    CHECK(cert.weighted_l2 > 0.0);
    CHECK(std::isfinite(cert.weighted_l2));
  }
}

TEST_CASE("zero reflection gives vanishing kernels and solutions") {
  auto g = testutil::zero_grid();
  auto kern = fourier_kernels(sweep(g, 6.0, 0.05), 10.0, 0.1);
  CHECK(kern.l1_R < 1e-10);
  CHECK(kern.l1_L < 1e-10);
  auto b1 = solve_right(kern, 0.5);
  auto b2 = solve_left(kern, -0.5);
  double worst = 0;
  for (const auto& m : b1.B) worst = std::max(worst, m.frobenius());
  for (const auto& m : b2.B) worst = std::max(worst, m.frobenius());
  CHECK(worst < 1e-12);
  auto rec = recover_k(kern, -2.0, 2.0, 0.5);
  for (const auto& m : rec.k) CHECK(m.frobenius() < 1e-12);
}

TEST_CASE("tail-completed integral is exact on an exponential profile") {
  std::vector<double> x, W2;
  for (int i = 0; i <= 200; ++i) {
    x.push_back(-10.0 + 0.1 * i);
    W2.push_back(std::exp(-std::abs(x.back())));
  }
  // int e^{-|x|} = 2
  CHECK(w2_integral_with_tails(x, W2) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("charge-term limits are read off the end slopes of arg k") {
  auto g = testutil::synth_grid(0.3, 0.2, 0.7, 16.0, 0.02);
  // c(x) = 0.7 sech^2(x): both limits vanish, C(x) -> -+0.7
  auto kern = fourier_kernels(sweep(g, 10.0, 0.02), 30.0, 0.05);
  auto rec = recover_k(kern, -8.0, 8.0, 0.25);
  // the fit windows sit where ||k|| is still resolvable (|x| ~ 3), so the
  // residual sech^2 contamination bounds the accuracy here
  double c0 = 0, cp = 0;
  charge_limits_from_k(rec, c0, cp);
  CHECK(std::abs(c0) < 0.03);
  CHECK(std::abs(cp) < 0.03);
}

TEST_CASE("misaligned recovery grid is rejected") {
  auto g = testutil::zero_grid();
  auto kern = fourier_kernels(sweep(g, 6.0, 0.05), 10.0, 0.1);
  CHECK_THROWS_AS(recover_k(kern, -1.0, 1.0, 0.033), bhscat::ConfigError);
}
