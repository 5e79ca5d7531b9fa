#include "bhscat/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "bhscat/errors.hpp"

namespace bhscat::recovery {

double extract_phase_slope(const std::vector<double>& x, const std::vector<cplx>& theta,
                           double* fit_residual, double tol) {
  if (x.size() != theta.size() || x.size() < 2)
    throw ConfigError("extract_phase_slope: need >= 2 samples");
  const double pi = 3.14159265358979323846;
  std::vector<double> ph(x.size());
  ph[0] = std::arg(theta[0]);
  for (size_t i = 1; i < x.size(); ++i) {
    double d = std::arg(theta[i]) - std::arg(theta[i - 1]);
    while (d > pi) d -= 2 * pi;
    while (d < -pi) d += 2 * pi;
    ph[i] = ph[i - 1] + d;
  }
  double slope, intercept;
  asymptotics::linear_fit(x, ph, slope, intercept);
  double resid = 0;
  for (size_t i = 0; i < x.size(); ++i)
    resid = std::max(resid, std::abs(ph[i] - slope * x[i] - intercept));
  if (fit_residual) *fit_residual = resid;
  if (resid > tol)
    throw QualityError("extract_phase_slope: unwrapped phase is not affine (residual " +
                       std::to_string(resid) + ")");
  return slope;
}

void extract_w_integrals_dS(const std::vector<int>& weights,
                            const std::vector<double>& w2_integrals, double m_f, double& Y,
                            double& Z) {
  if (weights.size() != w2_integrals.size() || weights.size() < 2)
    throw ConfigError("extract_w_integrals_dS: need >= 2 weights");
  if (m_f == 0.0)
    throw ConfigError("extract_w_integrals_dS: Z unavailable for a massless field");
  // least squares of I = w^2 Y + C with C = m^2 Z
  std::vector<double> w2(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) w2[i] = double(weights[i]) * weights[i];
  double C;
  asymptotics::linear_fit(w2, w2_integrals, Y, C);
  Z = C / (m_f * m_f);
}

double extract_r0_RN(const std::vector<int>& weights, const std::vector<double>& K) {
  if (weights.size() != K.size() || weights.size() < 2)
    throw ConfigError("extract_r0_RN: need >= 2 weights");
  std::vector<double> w2(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) w2[i] = double(weights[i]) * weights[i];
  double inv_r0, C;
  asymptotics::linear_fit(w2, K, inv_r0, C);
  if (inv_r0 <= 0) throw QualityError("extract_r0_RN: nonpositive w^2 coefficient");
  return 1.0 / inv_r0;
}

RecoveryReport recover_parameters_dS(double X, double Y, double Z, double q_f) {
  if (q_f == 0.0) throw ConfigError("recover_parameters_dS: q_f must be nonzero");
  if (Y <= 0 || Z <= 0)
    throw QualityError("recover_parameters_dS: degenerate data (Y or Z nonpositive)");
  RecoveryReport rep;
  rep.has_cosmo = true;
  rep.X = X;
  rep.Y = Y;
  rep.Z = Z;
  rep.Q = X / (q_f * Y);
  double P = Z / Y;  // r0 r+
  double disc = Z * Z + 4.0 * P;
  if (disc <= 0) throw QualityError("recover_parameters_dS: negative discriminant");
  rep.r0 = 0.5 * (-Z + std::sqrt(disc));
  rep.rplus = rep.r0 + Z;
  // [ 2/r+  r+^2/3 ] [M]   [1 + Q^2/r+^2]
  // [ 2/r0  r0^2/3 ] [L] = [1 + Q^2/r0^2]
  double a11 = 2.0 / rep.rplus, a12 = rep.rplus * rep.rplus / 3.0;
  double a21 = 2.0 / rep.r0, a22 = rep.r0 * rep.r0 / 3.0;
  double b1 = 1.0 + rep.Q * rep.Q / (rep.rplus * rep.rplus);
  double b2 = 1.0 + rep.Q * rep.Q / (rep.r0 * rep.r0);
  rep.det = a11 * a22 - a12 * a21;
  if (std::abs(rep.det) < 1e-12)
    throw QualityError("recover_parameters_dS: singular linear system");
  double fro2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
  rep.cond = fro2 / std::abs(rep.det);  // ||A||_F ||A^-1||_F for a 2x2 system
  rep.M = (b1 * a22 - a12 * b2) / rep.det;
  rep.Lambda = (a11 * b2 - b1 * a21) / rep.det;
  if (rep.M <= 0) throw QualityError("recover_parameters_dS: nonpositive mass");
  if (rep.Lambda < -1e-9) throw QualityError("recover_parameters_dS: negative Lambda");
  auto F = [&](double r) {
    return 1.0 - 2.0 * rep.M / r + rep.Q * rep.Q / (r * r) - rep.Lambda * r * r / 3.0;
  };
  rep.residual_F0 = std::abs(F(rep.r0));
  rep.residual_Fp = std::abs(F(rep.rplus));
  return rep;
}

RecoveryReport recover_parameters_RN(double c0, double r0, double q_f) {
  if (q_f == 0.0) throw ConfigError("recover_parameters_RN: q_f must be nonzero");
  if (r0 <= 0) throw QualityError("recover_parameters_RN: nonpositive r0");
  RecoveryReport rep;
  rep.has_cosmo = false;
  rep.c0 = c0;
  rep.r0 = r0;
  rep.Q = c0 * r0 / q_f;
  rep.M = (r0 * r0 + rep.Q * rep.Q) / (2.0 * r0);
  rep.Lambda = 0;
  if (rep.M <= std::abs(rep.Q))
    throw QualityError("recover_parameters_RN: recovered M <= |Q|");
  rep.residual_F0 =
      std::abs(1.0 - 2.0 * rep.M / r0 + rep.Q * rep.Q / (r0 * r0));
  return rep;
}

PairingData make_pairing_data(const reduction::PotentialProfile& prof,
                              const reduction::KGrid& grid,
                              const asymptotics::WavePacket& psi,
                              const asymptotics::WavePacket& phi,
                              const std::vector<double>& lambdas,
                              const std::vector<double>& shifts, double dxi) {
  using namespace asymptotics;
  PairingData d;
  d.weight = prof.weight();
  d.lambdas = lambdas;
  d.shifts = shifts;
  // One table per lambda covers all translations (shifts only add phases).
  std::vector<STable> tables;
  STable probe;
  probe.c0 = prof.c0();
  probe.cplus = prof.cplus();
  for (double lam : lambdas) {
    double lo, hi;
    required_xi_range(probe, psi, phi, lam, Channel::T_R, lo, hi);
    tables.push_back(make_stable(grid, prof, lo - 5 * dxi, hi + 5 * dxi, dxi));
  }
  for (double t : shifts) {
    WavePacket p1 = psi, p2 = phi;
    p1.shift += t;
    p2.shift += t;
    std::vector<cplx> row;
    for (size_t j = 0; j < lambdas.size(); ++j)
      row.push_back(stationary_pairing(tables[j], p1, p2, lambdas[j], Channel::T_R));
    d.F.push_back(std::move(row));
  }
  return d;
}

void fit_inverse_powers(const std::vector<double>& lambdas, const std::vector<cplx>& values,
                        std::vector<cplx>& coeffs) {
  int n = static_cast<int>(lambdas.size());
  if (n < 2 || values.size() != lambdas.size())
    throw ConfigError("fit_inverse_powers: need matching lambda/value lists, >= 2 entries");
  // Solve the Vandermonde system sum_k coeffs[k] / lambda_i^k = values[i]
  // by Gaussian elimination with partial pivoting (n is tiny).
  std::vector<std::vector<cplx>> Amat(n, std::vector<cplx>(n + 1));
  for (int i = 0; i < n; ++i) {
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) {
      Amat[i][k] = p;
      p /= lambdas[i];
    }
    Amat[i][n] = values[i];
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(Amat[r][col]) > std::abs(Amat[piv][col])) piv = r;
    std::swap(Amat[col], Amat[piv]);
    if (std::abs(Amat[col][col]) == 0.0)
      throw QualityError("fit_inverse_powers: singular system (repeated lambda?)");
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      cplx f = Amat[r][col] / Amat[col][col];
      for (int k = col; k <= n; ++k) Amat[r][k] -= f * Amat[col][k];
    }
  }
  coeffs.resize(n);
  for (int i = 0; i < n; ++i) coeffs[i] = Amat[i][n] / Amat[i][i];
}

RecoveryReport pipeline_dS(const std::vector<PairingData>& data, double m_f, double q_f) {
  if (data.size() < 2) throw ConfigError("pipeline_dS: need >= 2 weights");
  std::vector<int> weights;
  std::vector<double> w2ints;
  double X = 0, phase_resid = 0;
  for (size_t w = 0; w < data.size(); ++w) {
    const auto& d = data[w];
    std::vector<cplx> A0(d.shifts.size());
    double iw_acc = 0;
    for (size_t i = 0; i < d.shifts.size(); ++i) {
      std::vector<cplx> coeffs;
      fit_inverse_powers(d.lambdas, d.F[i], coeffs);
      A0[i] = coeffs[0];
      if (std::abs(coeffs[0]) == 0.0)
        throw QualityError("pipeline_dS: vanishing zeroth-order pairing");
      iw_acc += 2.0 * std::imag(coeffs[1] / coeffs[0]);
    }
    double resid = 0;
    double slope = extract_phase_slope(d.shifts, A0, &resid, 1e-3);
    phase_resid = std::max(phase_resid, resid);
    if (w == 0)
      X = slope;
    else
      X = 0.5 * (X + slope);  // weights should agree; average
    weights.push_back(d.weight);
    w2ints.push_back(iw_acc / double(d.shifts.size()));
  }
  double Y, Z;
  extract_w_integrals_dS(weights, w2ints, m_f, Y, Z);
  auto rep = recover_parameters_dS(X, Y, Z, q_f);
  rep.weights_used = static_cast<int>(weights.size());
  rep.phase_fit_residual = phase_resid;
  return rep;
}

RecoveryReport pipeline_RN(const std::vector<double>& x, const std::vector<cplx>& theta,
                           const std::vector<int>& weights,
                           const std::vector<std::vector<cplx>>& A, double q_f) {
  if (weights.size() != A.size() || weights.size() < 2)
    throw ConfigError("pipeline_RN: need >= 2 weights with matching A tables");
  double phase_resid = 0;
  double c0 = extract_phase_slope(x, theta, &phase_resid);
  std::vector<double> Ks;
  double m2 = 0;
  for (size_t w = 0; w < weights.size(); ++w) {
    // ratio A/Theta must be real and affine in x
    std::vector<double> ratio(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      cplx r = A[w][i] / theta[i];
      if (std::abs(r.imag()) > 1e-6 * (1.0 + std::abs(r.real())))
        throw QualityError("pipeline_RN: A/Theta is not real (wrong-regime data?)");
      ratio[i] = r.real();
    }
    double slope, K;
    asymptotics::linear_fit(x, ratio, slope, K);
    if (slope < 0) throw QualityError("pipeline_RN: negative mass-squared slope");
    m2 += slope / double(weights.size());
    Ks.push_back(K);
  }
  double r0 = extract_r0_RN(weights, Ks);
  auto rep = recover_parameters_RN(c0, r0, q_f);
  rep.m2 = m2;
  rep.weights_used = static_cast<int>(weights.size());
  rep.phase_fit_residual = phase_resid;
  return rep;
}

}  // namespace bhscat::recovery
