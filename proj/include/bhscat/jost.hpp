// Stationary scattering for the reduced system [Gamma^1 D_x + W(x)] X = xi X
// with W(x) = [[0, k(x)], [k(x)^*, 0]].
//
// Jost solutions are normalized to e^{i Gamma^1 xi x} at +inf (left) and
// -inf (right); the Faddeev matrices M = F e^{-i Gamma^1 xi x} satisfy
//   M' = i xi [Gamma^1, M] - i Gamma^1 W M,  M -> I at the normalization end.
//
// The integrator freezes k on each grid cell and applies the exact
// constant-coefficient propagator exp(i Gamma^1 (xi - W_mid) h), which has
// the closed form cos(w h) I + i sin(w h)/w * Gamma^1 (xi - W_mid) with
// w^2 = xi^2 - ||k||^2, because (Gamma^1 (xi - W))^2 is scalar. The phase
// oscillation is therefore treated exactly at every xi; the only error is
// the midpoint freezing of k, which is independent of xi.
#pragma once

#include <vector>

#include "bhscat/linalg.hpp"
#include "bhscat/reduction.hpp"

namespace bhscat::jost {

using reduction::KGrid;

// Transition coefficients a_l, a_r defined by F_l = F_r a_l, a_r = a_l^{-1},
// extracted from the Faddeev limits at the grid ends.
struct TransitionCoefficients {
  cplx xi;
  Mat2 al1, al2, al3, al4;
  Mat2 ar1, ar2, ar3, ar4;
  double product_defect = 0;  // || a_l a_r - I ||_F
};

// Faddeev matrix of the left (right) Jost solution at the far end of the
// grid, where the transition coefficients can be read off.
Block4 faddeev_left(const KGrid& g, cplx xi);
Block4 faddeev_right(const KGrid& g, cplx xi);

TransitionCoefficients transition_coefficients(const KGrid& g, cplx xi);

// Physical scattering matrix at real xi:
//   S0 = [[T_L, R], [L, T_R]],  T_L = al1^{-1}, T_R = ar4^{-1},
//   R = -al1^{-1} al2 = ar2 ar4^{-1},  L = al3 al1^{-1} = -ar4^{-1} ar3.
struct ScatteringMatrix {
  double xi = 0;
  Mat2 TL, R, L, TR;
  double unitarity_defect = 0;   // || S S^* - I ||_F
  double formula_mismatch = 0;   // disagreement between the two forms of R and L
};

ScatteringMatrix scattering_matrix(const KGrid& g, double xi);

// Dressing by the constant phase beta: diag blocks pick up e^{-i beta},
// the reflection from the right picks up e^{-2i beta}.
ScatteringMatrix dress(ScatteringMatrix s, double beta);

std::vector<ScatteringMatrix> sweep(const KGrid& g, const std::vector<double>& xis);

// Independent solution of the uncoupled Volterra integral equations by
// fixed-point iteration on the grid nodes (trapezoid rule). Used to
// cross-validate the propagator scheme at moderate xi.
struct FixedPointResult {
  Mat2 al1, al2;
  int iterations = 0;
  double residual = 0;
};
FixedPointResult faddeev_fixed_point(const KGrid& g, double xi, int max_iter = 64,
                                     double tol = 1e-12);

}  // namespace bhscat::jost
