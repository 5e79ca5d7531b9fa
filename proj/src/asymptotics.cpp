#include "bhscat/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bhscat/errors.hpp"
#include "bhscat/quadrature.hpp"

namespace bhscat::asymptotics {

namespace {

// Complex quadrature over [a, b] with fixed Gauss-Legendre panels; the
// integrands here are smooth and compactly supported, so a moderate fixed
// panel count reaches machine accuracy.
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, int panels = 24) {
  if (b <= a) return 0.0;
  double re = quad::gl15_panels([&](double s) { return f(s).real(); }, a, b, panels);
  double im = quad::gl15_panels([&](double s) { return f(s).imag(); }, a, b, panels);
  return {re, im};
}

}  // namespace

cplx ReconstructionPair::Theta(double x) const {
  if (has_cosmo) return std::exp(cplx(0.0, -beta + X * x));
  return std::exp(cplx(0.0, -gamma0 + c0 * x));
}

cplx ReconstructionPair::A(double x) const {
  if (has_cosmo) return 0.5 * I_UNIT * IW * Theta(x);
  return Theta(x) * (K + m2 * x);
}

ReconstructionPair reconstruction_pair(const PotentialProfile& prof) {
  ReconstructionPair p;
  p.has_cosmo = prof.map().horizons().has_cosmological();
  if (p.has_cosmo) {
    p.beta = prof.beta();
    p.X = prof.c0() - prof.cplus();
    p.IW = reduction::w2_integral_quadrature(prof);
  } else {
    p.c0 = prof.c0();
    p.gamma0 = prof.C_minus(0.0);  // int_{-inf}^0 (c - c0) ds
    auto ints = reduction::rn_integrals_quadrature(prof);
    p.K = ints.int_a2 + ints.int_b2_left + ints.int_bm2_right;
    p.m2 = prof.field().mass * prof.field().mass;
  }
  return p;
}

double WavePacket::g(double s) const {
  double u = (s - center) / halfwidth;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-u * u - 1.0 / (1.0 - u * u));
}

double WavePacket::gprime(double s) const {
  double u = (s - center) / halfwidth;
  if (std::abs(u) >= 1.0) return 0.0;
  double d = 1.0 - u * u;
  return g(s) * (-2.0 * u - 2.0 * u / (d * d)) / halfwidth;
}

cplx WavePacket::hat(double s) const { return std::exp(cplx(0.0, -s * shift)) * g(s); }

cplx WavePacket::hat_deriv(double s) const {
  return std::exp(cplx(0.0, -s * shift)) * (gprime(s) - I_UNIT * shift * g(s));
}

namespace {

// Plancherel overlap int psi_hat(s - off) conj(phi_hat(s)) ds, i.e. the
// position-space <e^{i off x} psi, phi>.
cplx shifted_overlap(const WavePacket& psi, const WavePacket& phi, double off) {
  double lo = std::max(psi.supp_lo() + off, phi.supp_lo());
  double hi = std::min(psi.supp_hi() + off, phi.supp_hi());
  return integrate_c([&](double s) { return psi.hat(s - off) * std::conj(phi.hat(s)); }, lo,
                     hi);
}

// int (x psi)^hat(s - off) conj(phi_hat(s)) ds with (x psi)^hat = i d/ds psi_hat.
cplx shifted_overlap_x(const WavePacket& psi, const WavePacket& phi, double off) {
  double lo = std::max(psi.supp_lo() + off, phi.supp_lo());
  double hi = std::min(psi.supp_hi() + off, phi.supp_hi());
  return integrate_c(
      [&](double s) { return I_UNIT * psi.hat_deriv(s - off) * std::conj(phi.hat(s)); }, lo,
      hi);
}

cplx spin_factor(const WavePacket& psi, const WavePacket& phi, Channel ch) {
  return ch == Channel::T_R ? dot(psi.dn, phi.dn) : dot(psi.up, phi.up);
}

}  // namespace

cplx predicted_zeroth(const ReconstructionPair& pair, const WavePacket& psi,
                      const WavePacket& phi, Channel ch) {
  cplx spin = spin_factor(psi, phi, ch);
  if (pair.has_cosmo)
    return std::exp(cplx(0.0, -pair.beta)) * shifted_overlap(psi, phi, pair.X) * spin;
  return std::exp(cplx(0.0, -pair.gamma0)) * shifted_overlap(psi, phi, pair.c0) * spin;
}

cplx predicted_pairing(const ReconstructionPair& pair, const WavePacket& psi,
                       const WavePacket& phi, double lambda, Channel ch) {
  double sign = (ch == Channel::T_R) ? +1.0 : -1.0;
  cplx zeroth = predicted_zeroth(pair, psi, phi, ch);
  if (pair.has_cosmo)
    return zeroth * (1.0 + sign * I_UNIT * pair.IW / (2.0 * lambda));
  // first order: (i / 2 lambda) <Theta (K + m^2 x) psi, phi>
  cplx spin = spin_factor(psi, phi, ch);
  cplx first = std::exp(cplx(0.0, -pair.gamma0)) * spin *
               (pair.K * shifted_overlap(psi, phi, pair.c0) +
                pair.m2 * shifted_overlap_x(psi, phi, pair.c0));
  return zeroth + sign * I_UNIT / (2.0 * lambda) * first;
}

namespace {

Mat2 cubic_interp(const std::vector<Mat2>& tab, double xi_lo, double dxi, double xi,
                  const char* what) {
  int n = static_cast<int>(tab.size());
  double t = (xi - xi_lo) / dxi;
  int j = static_cast<int>(std::floor(t)) - 1;  // 4-point stencil j..j+3
  j = std::max(0, std::min(n - 4, j));
  if (t < -1e-9 || t > n - 1 + 1e-9)
    throw ConfigError(std::string(what) + ": xi outside tabulated scattering range");
  double u = t - j;
  double w0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
  double w1 = u * (u - 2) * (u - 3) / 2.0;
  double w2 = -u * (u - 1) * (u - 3) / 2.0;
  double w3 = u * (u - 1) * (u - 2) / 6.0;
  return tab[j] * w0 + tab[j + 1] * w1 + tab[j + 2] * w2 + tab[j + 3] * w3;
}

}  // namespace

Mat2 STable::interp_TL(double xi) const { return cubic_interp(TL, xi_lo, dxi, xi, "S table"); }
Mat2 STable::interp_TR(double xi) const { return cubic_interp(TR, xi_lo, dxi, xi, "S table"); }

STable make_stable(const KGrid& grid, const PotentialProfile& prof, double xi_lo,
                   double xi_hi, double dxi) {
  if (xi_hi <= xi_lo || dxi <= 0) throw ConfigError("make_stable: bad xi range");
  STable t;
  t.c0 = prof.c0();
  t.cplus = prof.cplus();
  t.xi_lo = xi_lo;
  t.dxi = dxi;
  double beta = prof.beta();
  cplx ph = std::exp(cplx(0.0, -beta));
  int n = static_cast<int>(std::ceil((xi_hi - xi_lo) / dxi)) + 1;
  t.TL.reserve(n);
  t.TR.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto s = jost::scattering_matrix(grid, xi_lo + i * dxi);
    t.TL.push_back(s.TL * ph);
    t.TR.push_back(s.TR * ph);
  }
  return t;
}

void required_xi_range(const STable& table, const WavePacket& psi, const WavePacket& phi,
                       double lambda, Channel ch, double& lo, double& hi) {
  if (ch == Channel::T_R) {
    // arguments c+ - xi - lambda in supp(psi), c0 - xi - lambda in supp(phi)
    lo = std::max(table.cplus - lambda - psi.supp_hi(), table.c0 - lambda - phi.supp_hi());
    hi = std::min(table.cplus - lambda - psi.supp_lo(), table.c0 - lambda - phi.supp_lo());
  } else {
    // arguments xi - c0 - lambda in supp(psi), xi - c+ - lambda in supp(phi)
    lo = std::max(table.c0 + lambda + psi.supp_lo(), table.cplus + lambda + phi.supp_lo());
    hi = std::min(table.c0 + lambda + psi.supp_hi(), table.cplus + lambda + phi.supp_hi());
  }
}

cplx stationary_pairing(const STable& table, const WavePacket& psi, const WavePacket& phi,
                        double lambda, Channel ch) {
  double lo, hi;
  required_xi_range(table, psi, phi, lambda, ch, lo, hi);
  if (hi <= lo) return 0.0;
  if (lo < table.xi_lo || hi > table.xi_hi())
    throw ConfigError("stationary_pairing: packet support needs xi in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) +
                      "] but the table covers [" + std::to_string(table.xi_lo) + ", " +
                      std::to_string(table.xi_hi()) + "]");
  if (ch == Channel::T_R) {
    return integrate_c(
        [&](double xi) {
          Vec2 a = table.interp_TR(xi) * (psi.dn * psi.hat(table.cplus - xi - lambda));
          Vec2 b = phi.dn * phi.hat(table.c0 - xi - lambda);
          return dot(a, b);
        },
        lo, hi);
  }
  return integrate_c(
      [&](double xi) {
        Vec2 a = table.interp_TL(xi) * (psi.up * psi.hat(xi - table.c0 - lambda));
        Vec2 b = phi.up * phi.hat(xi - table.cplus - lambda);
        return dot(a, b);
      },
      lo, hi);
}

void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& intercept) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear_fit: need >= 2 points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double d = n * sxx - sx * sx;
  slope = (n * sxy - sx * sy) / d;
  intercept = (sy - slope * sx) / n;
}

ResidualScan expansion_residual_scan(const PotentialProfile& prof, const KGrid& grid,
                                     const WavePacket& psi, const WavePacket& phi,
                                     const std::vector<double>& lambdas, Channel ch,
                                     double dxi) {
  auto pair = reconstruction_pair(prof);
  ResidualScan scan;
  scan.lambdas = lambdas;
  STable probe;  // only carries the phase constants for range computation
  probe.c0 = prof.c0();
  probe.cplus = prof.cplus();
  for (double lam : lambdas) {
    double lo, hi;
    required_xi_range(probe, psi, phi, lam, ch, lo, hi);
    auto table = make_stable(grid, prof, lo - 5 * dxi, hi + 5 * dxi, dxi);
    cplx stat = stationary_pairing(table, psi, phi, lam, ch);
    scan.residuals.push_back(std::abs(stat - predicted_pairing(pair, psi, phi, lam, ch)));
    scan.zeroth_gap.push_back(std::abs(stat - predicted_zeroth(pair, psi, phi, ch)));
  }
  std::vector<double> lx, ly;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (scan.residuals[i] <= 0) continue;
    lx.push_back(std::log(lambdas[i]));
    ly.push_back(std::log(scan.residuals[i]));
  }
  linear_fit(lx, ly, scan.slope, scan.intercept);
  return scan;
}

}  // namespace bhscat::asymptotics
