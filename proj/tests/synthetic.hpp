// Shared helpers for the test suite: synthetic sampled potentials with
// known closed forms, and the two canonical parameter sets used throughout.
#pragma once

#include <cmath>
#include <memory>

#include "bhscat/geometry.hpp"
#include "bhscat/reduction.hpp"

namespace testutil {

// Gaussian-bump potential sampled on a uniform ladder; C(x) is the phase
// integral C^-(x), so c(x) = C'(x).
inline bhscat::reduction::KGrid synth_grid(double amp_a, double amp_b, double amp_c,
                                           double x_half = 12.0, double step = 0.02) {
  bhscat::reduction::KGrid g;
  g.x_lo = -x_half;
  g.x_hi = x_half;
  g.step = step;
  g.n_steps = (int)std::round((g.x_hi - g.x_lo) / step);
  int m = 2 * g.n_steps + 1;
  g.a.resize(m);
  g.b.resize(m);
  g.C.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = g.x_at(i);
    g.a[i] = amp_a * std::exp(-x * x);
    g.b[i] = amp_b * std::exp(-(x - 1.0) * (x - 1.0));
    g.C[i] = amp_c * std::tanh(x);
  }
  return g;
}

inline bhscat::reduction::KGrid zero_grid(double x_half = 10.0, double step = 0.05) {
  return synth_grid(0.0, 0.0, 0.0, x_half, step);
}

// Operator (spectral) norm of a 4x4 block matrix by power iteration on A*A.
inline double block4_opnorm(const bhscat::Block4& A) {
  using bhscat::cplx;
  cplx m[4][4];
  const bhscat::Mat2* blocks[2][2] = {{&A.b11, &A.b12}, {&A.b21, &A.b22}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = (*blocks[i / 2][j / 2])(i % 2, j % 2);
  cplx v[4] = {0.57, -0.21, cplx(0.1, 0.4), cplx(-0.3, 0.62)};
  double norm = 0;
  for (int it = 0; it < 200; ++it) {
    cplx av[4] = {}, w[4] = {};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) av[i] += m[i][j] * v[j];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) w[i] += std::conj(m[j][i]) * av[j];
    double nw = 0, nv = 0;
    for (int i = 0; i < 4; ++i) {
      nw += std::norm(w[i]);
      nv += std::norm(v[i]);
    }
    double next = std::sqrt(std::sqrt(nw / nv));
    if (std::abs(next - norm) < 1e-13 * (1 + next)) return next;
    norm = next;
    double s = std::sqrt(nw);
    if (s == 0) return 0.0;
    for (int i = 0; i < 4; ++i) v[i] = w[i] / s;
  }
  return norm;
}

// canonical cosmological example
inline bhscat::geometry::BlackHoleParams bh_cosmo() { return {1.0, 0.5, 0.05}; }
inline bhscat::reduction::FieldParams field_cosmo() { return {0.2, 1.0}; }

// canonical asymptotically flat example
inline bhscat::geometry::BlackHoleParams bh_flat() { return {5.0, 3.0, 0.0}; }
inline bhscat::reduction::FieldParams field_flat() { return {0.1, 1.0}; }

}  // namespace testutil
