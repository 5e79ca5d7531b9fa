#include "bhscat/marchenko.hpp"

#include <algorithm>
#include <cmath>

#include "bhscat/errors.hpp"

namespace bhscat::marchenko {

namespace {

Mat2 interp_linear(const std::vector<Mat2>& tab, double lo, double h, double a) {
  double t = (a - lo) / h;
  if (t <= 0.0 || t >= double(tab.size() - 1)) {
    // exact endpoints still count; outside the grid the kernel is treated as 0
    if (t == 0.0) return tab.front();
    if (t == double(tab.size() - 1)) return tab.back();
    return Mat2::zero();
  }
  int i = static_cast<int>(std::floor(t));
  double u = t - i;
  return tab[i] * (1.0 - u) + tab[i + 1] * u;
}

}  // namespace

Mat2 MarchenkoKernels::Rhat_at(double a) const { return interp_linear(Rhat, alpha_lo, h, a); }
Mat2 MarchenkoKernels::Lhat_at(double a) const { return interp_linear(Lhat, alpha_lo, h, a); }

MarchenkoKernels fourier_kernels(const std::vector<jost::ScatteringMatrix>& table,
                                 double alpha_max, double h_alpha) {
  if (table.size() < 8) throw ConfigError("fourier_kernels: scattering table too small");
  double h_xi = table[1].xi - table[0].xi;
  for (size_t i = 1; i < table.size(); ++i)
    if (std::abs(table[i].xi - table[i - 1].xi - h_xi) > 1e-9 * (1 + std::abs(h_xi)))
      throw ConfigError("fourier_kernels: xi grid is not uniform");
  double edge = std::max(std::max(table.front().R.norm2(), table.back().R.norm2()),
                         std::max(table.front().L.norm2(), table.back().L.norm2()));
  if (edge > 1e-8)
    throw ConfigError(
        "fourier_kernels: reflection is not negligible at the window edges (" +
        std::to_string(edge) + "); widen the xi range");
  double period = 2.0 * 3.14159265358979323846 / h_xi;
  if (period < 2.2 * alpha_max)
    throw ConfigError("fourier_kernels: xi spacing too coarse; periodization aliases into "
                      "the alpha window (need h_xi < pi / alpha_max)");

  MarchenkoKernels kern;
  kern.alpha_lo = -alpha_max;
  kern.h = h_alpha;
  kern.xi_step = h_xi;
  kern.xi_max = std::max(std::abs(table.front().xi), std::abs(table.back().xi));
  int n_alpha = static_cast<int>(std::round(2 * alpha_max / h_alpha)) + 1;
  kern.Rhat.assign(n_alpha, Mat2::zero());
  kern.Lhat.assign(n_alpha, Mat2::zero());
  const double inv2pi = 1.0 / (2.0 * 3.14159265358979323846);
  for (int ia = 0; ia < n_alpha; ++ia) {
    double a = kern.alpha_lo + ia * h_alpha;
    Mat2 r = Mat2::zero(), l = Mat2::zero();
    for (size_t j = 0; j < table.size(); ++j) {
      double w = (j == 0 || j + 1 == table.size()) ? 0.5 : 1.0;
      cplx ph = std::exp(I_UNIT * table[j].xi * a) * (w * h_xi * inv2pi);
      r += table[j].R * ph;
      l += table[j].L * ph;
    }
    kern.Rhat[ia] = r;
    kern.Lhat[ia] = l;
  }
  for (const auto& s : table) {
    kern.sup_R = std::max(kern.sup_R, s.R.norm2());
    kern.sup_L = std::max(kern.sup_L, s.L.norm2());
  }
  for (int ia = 0; ia < n_alpha; ++ia) {
    kern.l1_R += kern.Rhat[ia].frobenius() * h_alpha;
    kern.l1_L += kern.Lhat[ia].frobenius() * h_alpha;
  }
  kern.decay_rate_R = decay_certificate(kern, false).rate;
  kern.decay_rate_L = decay_certificate(kern, true).rate;
  return kern;
}

DecayCertificate decay_certificate(const MarchenkoKernels& kern, bool left) {
  const auto& tab = left ? kern.Lhat : kern.Rhat;
  int n = static_cast<int>(tab.size());
  double peak = 0;
  for (const auto& m : tab) peak = std::max(peak, m.frobenius());
  if (peak == 0) return {0.0, 0.0};
  // fit log||hat|| against |alpha| over the outer halves, above the noise floor
  std::vector<double> xs, ys;
  for (int i = 0; i < n; ++i) {
    double a = kern.alpha_lo + i * kern.h;
    double v = tab[i].frobenius();
    if (std::abs(a) < 0.25 * std::abs(kern.alpha_lo)) continue;
    if (v < peak * 1e-11 || v <= 0) continue;
    xs.push_back(std::abs(a));
    ys.push_back(std::log(v));
  }
  DecayCertificate cert;
  if (xs.size() < 4) return cert;
  double slope, icpt;
  asymptotics::linear_fit(xs, ys, slope, icpt);
  cert.rate = -slope;
  double half = 0.5 * cert.rate;
  for (int i = 0; i < n; ++i) {
    double a = kern.alpha_lo + i * kern.h;
    double v = tab[i].frobenius();
    cert.weighted_l2 += std::exp(2.0 * half * std::abs(a)) * v * v * kern.h;
  }
  return cert;
}

namespace {

// Iterative radix-2 FFT (in place). inverse = true applies the 1/M scale.
void fft(std::vector<cplx>& a, bool inverse) {
  int m = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < m; ++i) {
    int bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846;
  for (int len = 2; len <= m; len <<= 1) {
    double ang = 2 * pi / len * (inverse ? 1 : -1);
    cplx wl = std::polar(1.0, ang);
    for (int i = 0; i < m; i += len) {
      cplx w = 1.0;
      for (int j = 0; j < len / 2; ++j) {
        cplx u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& z : a) z /= double(m);
}

// Block cross-correlation s(j) = sum_i u(i) v(i+j), j = 0..n-1, where the
// 2x2-valued u has length n and v has length 2n-1. vf holds the 4 component
// spectra of v (reversed-u convolution layout); uf is scratch.
struct CorrPlan {
  int n = 0, m = 0;                    // logical length, FFT length
  std::vector<std::vector<cplx>> vf;   // 4 spectra of v components

  void set_kernel(const std::vector<Mat2>& v, int n_logical) {
    n = n_logical;
    m = 4;
    while (m < 3 * n) m <<= 1;
    vf.assign(4, std::vector<cplx>(m, 0.0));
    for (int c = 0; c < 4; ++c) {
      for (size_t i = 0; i < v.size(); ++i) vf[c][i] = v[i].e[c];
      fft(vf[c], false);
    }
  }

  // u carries the quadrature weights already; result overwrites `out`.
  void apply(const std::vector<Mat2>& u, std::vector<Mat2>& out) const {
    std::vector<std::vector<cplx>> uf(4, std::vector<cplx>(m, 0.0));
    for (int c = 0; c < 4; ++c) {
      for (int i = 0; i < n; ++i) uf[c][n - 1 - i] = u[i].e[c];
      fft(uf[c], false);
    }
    // G_ab = sum_c corr(u_ac, v_cb): assemble the 4 output spectra
    std::vector<std::vector<cplx>> gf(4, std::vector<cplx>(m));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int t = 0; t < m; ++t)
          gf[2 * a + b][t] =
              uf[2 * a + 0][t] * vf[0 * 2 + b][t] + uf[2 * a + 1][t] * vf[1 * 2 + b][t];
    for (int c = 0; c < 4; ++c) fft(gf[c], true);
    out.resize(n);
    for (int j = 0; j < n; ++j)
      out[j] = Mat2{{gf[0][n - 1 + j], gf[1][n - 1 + j], gf[2][n - 1 + j],
                     gf[3][n - 1 + j]}};
  }
};

// vector-of-blocks helpers for the Krylov solve
double blk_max(const std::vector<Mat2>& v) {
  double m = 0;
  for (const auto& b : v) m = std::max(m, b.frobenius());
  return m;
}
cplx blk_dot(const std::vector<Mat2>& a, const std::vector<Mat2>& b) {
  cplx s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (int c = 0; c < 4; ++c) s += std::conj(a[i].e[c]) * b[i].e[c];
  return s;
}

// Common linear-solve core. `shifted` holds the kernel on arguments
// i h + base for i = 0 .. 2N, where base = 2x (right) or -2x (left).
// The equation is affine, B = -kernel + T B, where T is the double
// correlation integral; both correlation stages are evaluated by FFT and
// (I - T) B = -kernel is solved by BiCGSTAB. Plain fixed-point iteration is
// not viable here: near-total reflection at low energies puts the
// contraction factor arbitrarily close to 1.
MarchenkoSolution solve_core(const std::vector<Mat2>& shifted, double h, double x,
                             double tol, int max_iter, const std::vector<Mat2>* warm) {
  const Mat2 tau = Mat2::diag(1.0, -1.0);
  int n2 = static_cast<int>(shifted.size());
  int n = (n2 + 1) / 2;  // B grid size
  std::vector<Mat2> P(n2);
  for (int i = 0; i < n2; ++i) P[i] = tau * shifted[i].conj() * tau;

  CorrPlan stage1, stage2;
  stage1.set_kernel(P, n);
  stage2.set_kernel(shifted, n);
  std::vector<Mat2> scratch(n), G(n);
  int applies = 0;
  // y = (I - T) v
  auto apply = [&](const std::vector<Mat2>& v, std::vector<Mat2>& y) {
    ++applies;
    scratch = v;
    scratch[0] *= 0.5;
    scratch[n - 1] *= 0.5;
    stage1.apply(scratch, G);
    for (auto& g : G) g *= (cplx)h;
    G[0] *= 0.5;
    G[n - 1] *= 0.5;
    stage2.apply(G, y);
    for (int i = 0; i < n; ++i) y[i] = v[i] - y[i] * (cplx)h;
  };

  std::vector<Mat2> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = -shifted[i];

  std::vector<Mat2> B(n, Mat2::zero());
  if (warm)
    for (int i = 0; i < n && i < static_cast<int>(warm->size()); ++i) B[i] = (*warm)[i];

  // BiCGSTAB
  std::vector<Mat2> r(n), rhat, p(n, Mat2::zero()), v(n, Mat2::zero()), s(n), t(n), tmp(n);
  apply(B, tmp);
  for (int i = 0; i < n; ++i) r[i] = rhs[i] - tmp[i];
  rhat = r;
  cplx rho = 1.0, alpha = 1.0, omega = 1.0;
  double resid = blk_max(r);
  while (resid > tol) {
    if (applies > max_iter)
      throw ConvergenceError("Marchenko solve did not converge (residual " +
                             std::to_string(resid) + ")");
    cplx rho1 = blk_dot(rhat, r);
    if (std::abs(rho1) < 1e-290) {  // breakdown: restart with the current residual
      rhat = r;
      rho1 = blk_dot(rhat, r);
      if (std::abs(rho1) < 1e-290)
        throw ConvergenceError("Marchenko solve stagnated");
    }
    cplx beta = (rho1 / rho) * (alpha / omega);
    for (int i = 0; i < n; ++i) p[i] = r[i] + (p[i] - v[i] * omega) * beta;
    apply(p, v);
    alpha = rho1 / blk_dot(rhat, v);
    for (int i = 0; i < n; ++i) s[i] = r[i] - v[i] * alpha;
    if (blk_max(s) <= tol) {
      for (int i = 0; i < n; ++i) B[i] += p[i] * alpha;
      resid = blk_max(s);
      break;
    }
    apply(s, t);
    omega = blk_dot(t, s) / blk_dot(t, t);
    for (int i = 0; i < n; ++i) {
      B[i] += p[i] * alpha + s[i] * omega;
      r[i] = s[i] - t[i] * omega;
    }
    rho = rho1;
    resid = blk_max(r);
    if (!(resid < 1e12)) throw ConvergenceError("Marchenko solve diverged");
  }

  MarchenkoSolution sol;
  sol.x = x;
  sol.h = h;
  sol.B = std::move(B);
  sol.iterations = applies;
  sol.residual = resid;
  sol.boundary = sol.B.empty() ? Mat2::zero() : sol.B[0];
  return sol;
}

std::vector<Mat2> shifted_kernel(const MarchenkoKernels& kern, bool left, double base) {
  // grid length: keep nodes up to the end of the tabulated kernel
  double reach = kern.alpha_hi() - base;
  int n = std::max(2, static_cast<int>(std::floor(reach / kern.h)) + 1);
  std::vector<Mat2> out(2 * n - 1);
  for (int i = 0; i < 2 * n - 1; ++i)
    out[i] = left ? kern.Lhat_at(base + i * kern.h) : kern.Rhat_at(base + i * kern.h);
  return out;
}

}  // namespace

MarchenkoSolution solve_right(const MarchenkoKernels& kern, double x, double tol,
                              int max_iter, const std::vector<Mat2>* warm) {
  return solve_core(shifted_kernel(kern, false, 2.0 * x), kern.h, x, tol, max_iter, warm);
}

MarchenkoSolution solve_left(const MarchenkoKernels& kern, double x, double tol,
                             int max_iter, const std::vector<Mat2>* warm) {
  return solve_core(shifted_kernel(kern, true, -2.0 * x), kern.h, x, tol, max_iter, warm);
}

KRecovery recover_k(const MarchenkoKernels& kern, double x_min, double x_max, double dx,
                    double tol) {
  double ratio = dx / (0.5 * kern.h);
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ConfigError("recover_k: dx must be a multiple of h_alpha / 2");
  if (x_min > 0 || x_max < 0 || dx <= 0) throw ConfigError("recover_k: bad x range");

  int n_pos = static_cast<int>(std::round(x_max / dx));
  int n_neg = static_cast<int>(std::round(-x_min / dx));
  KRecovery rec;
  rec.x.resize(n_pos + n_neg + 1);
  rec.k.resize(n_pos + n_neg + 1);

  std::vector<Mat2> warm;
  Mat2 k0_left;
  // left branch: march from x = x_min up to 0
  for (int j = -n_neg; j <= 0; ++j) {
    double x = j * dx;
    auto sol = solve_left(kern, x, tol, 2000, warm.empty() ? nullptr : &warm);
    warm = sol.B;
    Mat2 k = sol.boundary.adjoint() * (2.0 * I_UNIT);
    if (j < 0) {
      rec.x[j + n_neg] = x;
      rec.k[j + n_neg] = k;
    } else {
      k0_left = k;
    }
  }
  warm.clear();
  // right branch: march from x = 0 up to x_max
  for (int j = 0; j <= n_pos; ++j) {
    double x = j * dx;
    auto sol = solve_right(kern, x, tol, 2000, warm.empty() ? nullptr : &warm);
    warm = sol.B;
    rec.x[j + n_neg] = x;
    rec.k[j + n_neg] = sol.boundary * (-2.0 * I_UNIT);
  }
  rec.branch_mismatch = (rec.k[n_neg] - k0_left).frobenius();
  rec.W2.resize(rec.k.size());
  for (size_t i = 0; i < rec.k.size(); ++i) {
    double f = rec.k[i].frobenius();
    rec.W2[i] = 0.5 * f * f;
  }
  return rec;
}

double w2_integral_with_tails(const std::vector<double>& x, const std::vector<double>& W2) {
  int n = static_cast<int>(x.size());
  if (n < 8) throw ConfigError("w2_integral_with_tails: too few samples");
  double core = 0;
  for (int i = 1; i < n; ++i) core += 0.5 * (W2[i] + W2[i - 1]) * (x[i] - x[i - 1]);
  // exponential tail completion on both ends from 5-point log fits
  auto tail = [&](bool leftside) {
    std::vector<double> xs, ys;
    for (int j = 0; j < 5; ++j) {
      int i = leftside ? j : n - 1 - j;
      if (W2[i] <= 0) return 0.0;
      xs.push_back(x[i]);
      ys.push_back(std::log(W2[i]));
    }
    double slope, icpt;
    asymptotics::linear_fit(xs, ys, slope, icpt);
    double rate = leftside ? slope : -slope;  // decay rate moving outward
    if (rate <= 0) return 0.0;
    int edge = leftside ? 0 : n - 1;
    return W2[edge] / rate;
  };
  return core + tail(true) + tail(false);
}

void charge_limits_from_k(const KRecovery& rec, double& c0, double& cplus) {
  int n = static_cast<int>(rec.x.size());
  double peak = 0;
  for (const auto& m : rec.k) peak = std::max(peak, m.frobenius());
  // unwrap arg of the upper-right entry: arg k_{01} = 2 C^-(x)
  const double pi = 3.14159265358979323846;
  std::vector<double> ph(n);
  std::vector<bool> ok(n);
  for (int i = 0; i < n; ++i) ok[i] = rec.k[i].frobenius() > 1e-6 * peak;
  int first = 0;
  while (first < n && !ok[first]) ++first;
  int last = n - 1;
  while (last >= 0 && !ok[last]) --last;
  if (last - first < 12)
    throw QualityError("charge_limits_from_k: too few usable samples of k");
  ph[first] = std::arg(rec.k[first](0, 1));
  for (int i = first + 1; i <= last; ++i) {
    double d = std::arg(rec.k[i](0, 1)) - std::arg(rec.k[i - 1](0, 1));
    while (d > pi) d -= 2 * pi;
    while (d < -pi) d += 2 * pi;
    ph[i] = ph[i - 1] + d;
  }
  auto end_slope = [&](int i0, int i1) {
    std::vector<double> xs, ys;
    for (int i = i0; i <= i1; ++i) {
      xs.push_back(rec.x[i]);
      ys.push_back(0.5 * ph[i]);
    }
    double slope, icpt;
    asymptotics::linear_fit(xs, ys, slope, icpt);
    return slope;
  };
  int m = std::min(8, (last - first) / 3);
  c0 = end_slope(first, first + m - 1);
  cplus = end_slope(last - m + 1, last);
}

recovery::RecoveryReport recover_bh_from_k(const std::vector<KRecovery>& per_weight,
                                           const std::vector<int>& weights, double m_f,
                                           double q_f) {
  if (per_weight.size() != weights.size() || weights.size() < 2)
    throw ConfigError("recover_bh_from_k: need >= 2 weights");
  std::vector<double> w2ints;
  double c0 = 0, cplus = 0;
  for (size_t w = 0; w < weights.size(); ++w) {
    w2ints.push_back(w2_integral_with_tails(per_weight[w].x, per_weight[w].W2));
    double a, b;
    charge_limits_from_k(per_weight[w], a, b);
    c0 += a / double(weights.size());
    cplus += b / double(weights.size());
  }
  double Y, Z;
  recovery::extract_w_integrals_dS(weights, w2ints, m_f, Y, Z);
  auto rep = recovery::recover_parameters_dS(c0 - cplus, Y, Z, q_f);
  rep.weights_used = static_cast<int>(weights.size());
  rep.c0 = c0;
  return rep;
}

}  // namespace bhscat::marchenko
