#include "bhscat/jost.hpp"

#include <cmath>

#include "bhscat/errors.hpp"

namespace bhscat::jost {

namespace {

// cos(w h) and sin(w h)/w for complex w^2, even in w so the sqrt branch
// does not matter; series near w h = 0.
void trig_factors(cplx w2, double h, cplx& ch, cplx& sh) {
  cplx w = std::sqrt(w2);
  cplx z = w * h;
  if (std::abs(z) < 1e-4) {
    cplx z2 = z * z;
    ch = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
    sh = h * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
  } else {
    ch = std::cos(z);
    sh = std::sin(z) / w;
  }
}

struct CellPropagator {
  cplx e11, e22;   // scalar diagonal blocks
  Mat2 E12, E21;   // off-diagonal blocks

  // exp(s * i Gamma^1 (xi - W) h) with s = +1 or -1
  static CellPropagator make(cplx xi, const Mat2& k, double h, int s) {
    double W2 = std::abs(k.e[1]) * std::abs(k.e[1]) + std::abs(k.e[0]) * std::abs(k.e[0]);
    cplx ch, sh;
    trig_factors(xi * xi - W2, h, ch, sh);
    cplx f = I_UNIT * sh * static_cast<double>(s);
    CellPropagator p;
    p.e11 = ch + f * xi;
    p.e22 = ch - f * xi;
    p.E12 = k * (-f);
    p.E21 = k.adjoint() * f;
    return p;
  }

  // B <- E * B
  void apply(Block4& m) const {
    Mat2 n11 = m.b11 * e11 + E12 * m.b21;
    Mat2 n12 = m.b12 * e11 + E12 * m.b22;
    Mat2 n21 = E21 * m.b11 + m.b21 * e22;
    Mat2 n22 = E21 * m.b12 + m.b22 * e22;
    m.b11 = n11;
    m.b12 = n12;
    m.b21 = n21;
    m.b22 = n22;
  }
};

}  // namespace

Block4 faddeev_right(const KGrid& g, cplx xi) {
  Block4 m = Block4::identity();
  const double h = g.step;
  cplx up = std::exp(-I_UNIT * xi * h), dn = std::exp(I_UNIT * xi * h);
  for (int j = 0; j < g.n_steps; ++j) {
    auto E = CellPropagator::make(xi, g.k_at(2 * j + 1), h, +1);
    E.apply(m);
    m.scale_columns(up, dn);  // M(x+h) = E M(x) e^{-i Gamma^1 xi h}
  }
  return m;
}

Block4 faddeev_left(const KGrid& g, cplx xi) {
  Block4 m = Block4::identity();
  const double h = g.step;
  cplx up = std::exp(I_UNIT * xi * h), dn = std::exp(-I_UNIT * xi * h);
  for (int j = g.n_steps - 1; j >= 0; --j) {
    auto E = CellPropagator::make(xi, g.k_at(2 * j + 1), h, -1);  // inverse step
    E.apply(m);
    m.scale_columns(up, dn);  // M(x) = E^{-1} M(x+h) e^{+i Gamma^1 xi h}
  }
  return m;
}

TransitionCoefficients transition_coefficients(const KGrid& g, cplx xi) {
  TransitionCoefficients t;
  t.xi = xi;

  Block4 ml = faddeev_left(g, xi);   // at x_lo
  Block4 mr = faddeev_right(g, xi);  // at x_hi

  // a_l = e^{-i Gamma^1 xi x_lo} M_l(x_lo) e^{i Gamma^1 xi x_lo}
  cplx phl = std::exp(-2.0 * I_UNIT * xi * g.x_lo);
  t.al1 = ml.b11;
  t.al2 = ml.b12 * phl;
  t.al3 = ml.b21 * (cplx(1.0) / phl);
  t.al4 = ml.b22;

  cplx phr = std::exp(-2.0 * I_UNIT * xi * g.x_hi);
  t.ar1 = mr.b11;
  t.ar2 = mr.b12 * phr;
  t.ar3 = mr.b21 * (cplx(1.0) / phr);
  t.ar4 = mr.b22;

  Block4 al{t.al1, t.al2, t.al3, t.al4}, ar{t.ar1, t.ar2, t.ar3, t.ar4};
  t.product_defect = ((al * ar) - Block4::identity()).frobenius();
  return t;
}

ScatteringMatrix scattering_matrix(const KGrid& g, double xi) {
  auto t = transition_coefficients(g, cplx(xi));
  ScatteringMatrix s;
  s.xi = xi;
  Mat2 al1_inv = t.al1.inverse();
  Mat2 ar4_inv = t.ar4.inverse();
  s.TL = al1_inv;
  s.TR = ar4_inv;
  s.R = -(al1_inv * t.al2);
  s.L = t.al3 * al1_inv;
  Mat2 R2 = t.ar2 * ar4_inv;
  Mat2 L2 = -(ar4_inv * t.ar3);
  s.formula_mismatch = std::max((s.R - R2).frobenius(), (s.L - L2).frobenius());

  Block4 S{s.TL, s.R, s.L, s.TR};
  s.unitarity_defect = ((S * S.adjoint()) - Block4::identity()).frobenius();
  return s;
}

ScatteringMatrix dress(ScatteringMatrix s, double beta) {
  cplx ph = std::exp(-I_UNIT * beta);
  s.TL = s.TL * ph;
  s.TR = s.TR * ph;
  s.R = s.R * (ph * ph);
  return s;
}

std::vector<ScatteringMatrix> sweep(const KGrid& g, const std::vector<double>& xis) {
  std::vector<ScatteringMatrix> out;
  out.reserve(xis.size());
  for (double xi : xis) out.push_back(scattering_matrix(g, xi));
  return out;
}

FixedPointResult faddeev_fixed_point(const KGrid& g, double xi, int max_iter, double tol) {
  // Volterra equations for the uncoupled blocks, iterated on the grid nodes:
  //   M4(x) = I + int_x^inf e^{2 i xi y} k*(y) int_y^inf e^{-2 i xi z} k(z) M4(z) dz dy
  //   M3(x) = -i int_x^inf e^{2 i xi (y-x)} k*(y) M1(y) dy,
  //   M1(x) = I + i int_x^inf k(y) M3(y) dy
  // and then a_l1 = M1(x_lo), a_l2 = i int e^{-2 i xi y} k(y) M4(y) dy.
  const int n = g.n_steps + 1;
  const double h = g.step;
  std::vector<Mat2> k(n), ks(n);
  std::vector<cplx> em(n), ep(n);
  for (int i = 0; i < n; ++i) {
    k[i] = g.k_at(2 * i);
    ks[i] = k[i].adjoint();
    double x = g.x_at(2 * i);
    em[i] = std::exp(-2.0 * I_UNIT * xi * x);
    ep[i] = std::exp(2.0 * I_UNIT * xi * x);
  }

  auto cumulative_from_top = [&](const std::vector<Mat2>& f, std::vector<Mat2>& out) {
    out[n - 1] = Mat2::zero();
    for (int i = n - 2; i >= 0; --i)
      out[i] = out[i + 1] + (f[i] + f[i + 1]) * cplx(0.5 * h);
  };

  std::vector<Mat2> m4(n, Mat2::identity()), tmp(n), inner(n), outer(n);
  FixedPointResult res;
  double resid = 1e300;
  int it = 0;
  for (; it < max_iter && resid > tol; ++it) {
    for (int i = 0; i < n; ++i) tmp[i] = k[i] * m4[i] * em[i];
    cumulative_from_top(tmp, inner);
    for (int i = 0; i < n; ++i) tmp[i] = ks[i] * inner[i] * ep[i];
    cumulative_from_top(tmp, outer);
    resid = 0;
    for (int i = 0; i < n; ++i) {
      Mat2 next = Mat2::identity() + outer[i];
      resid = std::max(resid, (next - m4[i]).frobenius());
      m4[i] = next;
    }
  }
  if (resid > tol)
    throw ConvergenceError("Volterra fixed-point iteration did not reach tolerance");

  // a_l2 = i int e^{-2 i xi y} k(y) M4(y) dy  (trapezoid over the nodes)
  Mat2 al2 = Mat2::zero();
  for (int i = 0; i < n; ++i) {
    double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    al2 += k[i] * m4[i] * (em[i] * wgt * h);
  }
  res.al2 = al2 * I_UNIT;

  // M3/M1 pair for a_l1
  std::vector<Mat2> m1(n, Mat2::identity()), m3(n, Mat2::zero());
  resid = 1e300;
  for (int jt = 0; jt < max_iter && resid > tol; ++jt) {
    for (int i = 0; i < n; ++i) tmp[i] = ks[i] * m1[i] * ep[i];
    cumulative_from_top(tmp, inner);  // int_x^inf e^{2 i xi y} k* M1 dy
    for (int i = 0; i < n; ++i) m3[i] = inner[i] * (-I_UNIT * em[i]);
    for (int i = 0; i < n; ++i) tmp[i] = k[i] * m3[i];
    cumulative_from_top(tmp, outer);
    resid = 0;
    for (int i = 0; i < n; ++i) {
      Mat2 next = Mat2::identity() + outer[i] * I_UNIT;
      resid = std::max(resid, (next - m1[i]).frobenius());
      m1[i] = next;
    }
  }
  if (resid > tol)
    throw ConvergenceError("Volterra fixed-point iteration did not reach tolerance");
  res.al1 = m1[0];
  res.iterations = it;
  res.residual = resid;
  return res;
}

}  // namespace bhscat::jost
