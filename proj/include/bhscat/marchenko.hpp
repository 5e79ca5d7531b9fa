// Inverse scattering from reflection data.
//
// The reflection blocks R(xi), L(xi) are Fourier-transformed to kernels
//   Rhat(a) = (1/2pi) int e^{i xi a} R(xi) dxi   (same for L),
// and the potential block k(x) solves the Marchenko-type equations
//   B1(x,a) = -Rhat(a+2x)
//             + int int B1(x,g) [tau conj(Rhat(g+d+2x)) tau] Rhat(a+d+2x) dg dd,
//   B2(x,a) = -Lhat(a-2x)
//             + int int B2(x,g) [tau conj(Lhat(g+d-2x)) tau] Lhat(d+a-2x) dd dg,
// over a >= 0, with tau = diag(1,-1), and boundary values
//   k(x) = -2i B1(x,0+)   for x >= 0,
//   k(x) = +2i B2(x,0+)^* for x <= 0   (^* = conjugate transpose).
// In the weak-coupling (Born) limit these reduce to k(x) = 2i Rhat(2x) and
// k(x)^* = 2i Lhat(-2x), which fixes all sign/conjugation conventions
// against the forward solver of this code base.
#pragma once

#include <vector>

#include "bhscat/jost.hpp"
#include "bhscat/linalg.hpp"
#include "bhscat/recovery.hpp"

namespace bhscat::marchenko {

struct MarchenkoKernels {
  double alpha_lo = 0, h = 0;  // uniform alpha grid alpha_lo + i h
  std::vector<Mat2> Rhat, Lhat;
  double sup_R = 0, sup_L = 0;        // sup over xi of the operator norms
  double decay_rate_R = 0, decay_rate_L = 0;  // fitted exponential decay of the kernels
  double l1_R = 0, l1_L = 0;          // L1 norms of ||Rhat||, ||Lhat||
  double xi_step = 0, xi_max = 0;

  double alpha_hi() const { return alpha_lo + h * (Rhat.size() - 1); }
  Mat2 Rhat_at(double a) const;  // linear interpolation, zero outside the grid
  Mat2 Lhat_at(double a) const;
};

// Fourier kernels from a uniformly spaced scattering sweep. Validates that
// the window edges carry negligible reflection and that the xi spacing is
// fine enough that periodization does not alias into [-alpha_max, alpha_max].
MarchenkoKernels fourier_kernels(const std::vector<jost::ScatteringMatrix>& table,
                                 double alpha_max, double h_alpha);

// Exponential-decay certificate: fitted rate of log||Rhat|| over the tail,
// plus square-summability of e^{rate/2 |a|} ||Rhat(a)||.
struct DecayCertificate {
  double rate = 0;        // fitted decay rate (positive = decaying)
  double weighted_l2 = 0; // sum of e^{rate |a|} ||Rhat||^2 h  at half the fitted rate
};
DecayCertificate decay_certificate(const MarchenkoKernels& kern, bool left);

struct MarchenkoSolution {
  double x = 0;
  double h = 0;
  std::vector<Mat2> B;  // B(x, i h), i = 0..N
  int iterations = 0;
  double residual = 0;
  Mat2 boundary;        // B(x, 0+)
};

// Fixed-point solve of one Marchenko equation at position x. `warm` (may be
// empty) seeds the iteration with a neighboring solution.
MarchenkoSolution solve_right(const MarchenkoKernels& kern, double x, double tol = 1e-9,
                              int max_iter = 2000, const std::vector<Mat2>* warm = nullptr);
MarchenkoSolution solve_left(const MarchenkoKernels& kern, double x, double tol = 1e-9,
                             int max_iter = 2000, const std::vector<Mat2>* warm = nullptr);

struct KRecovery {
  std::vector<double> x;
  std::vector<Mat2> k;
  std::vector<double> W2;      // tr(k k*) / 2
  double branch_mismatch = 0;  // disagreement of the two equations at x = 0
};

// Recover k on [x_min, x_max] with spacing dx (dx must be a multiple of
// h_alpha / 2 so the shifted kernel arguments stay on grid nodes).
KRecovery recover_k(const MarchenkoKernels& kern, double x_min, double x_max, double dx,
                    double tol = 1e-9);

// Potential-side parameter extraction: W^2 integrals per weight with
// exponential tail completion, charge-term limits c0, c+ from the slope of
// arg k_{01} / 2 at the two ends, then the algebraic recovery.
recovery::RecoveryReport recover_bh_from_k(const std::vector<KRecovery>& per_weight,
                                           const std::vector<int>& weights, double m_f,
                                           double q_f);

// Helpers exposed for tests.
double w2_integral_with_tails(const std::vector<double>& x, const std::vector<double>& W2);
void charge_limits_from_k(const KRecovery& rec, double& c0, double& cplus);

}  // namespace bhscat::marchenko
