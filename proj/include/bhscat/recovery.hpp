// Parameter recovery: turns reconstruction data (phase slopes and potential
// integrals across harmonics) back into the black-hole parameters.
//
// Cosmological regime: the intermediates are
//   X = c0 - c+ = q Q (r+ - r0)/(r0 r+),  Y = (r+ - r0)/(r0 r+),  Z = r+ - r0,
// extracted from the phase slope of the zeroth-order pairing term and from
// the per-weight integrals int W^2 = w^2 Y + m^2 Z. Then Q = X/(qY),
// r0 r+ = Z/Y fixes r0, r+, and (M, Lambda) solve the linear system given
// by F(r0) = F(r+) = 0.
//
// Flat regime: c0 comes from the phase slope of Theta, m^2 from the slope
// of the real affine ratio A/Theta, r0 from its w^2 coefficient, then
// Q = c0 r0 / q and M = (r0^2 + Q^2)/(2 r0).
#pragma once

#include <vector>

#include "bhscat/asymptotics.hpp"
#include "bhscat/linalg.hpp"

namespace bhscat::recovery {

struct RecoveryReport {
  bool has_cosmo = false;
  // intermediates
  double X = 0, Y = 0, Z = 0;           // cosmological regime
  double c0 = 0, m2 = 0;                // flat regime
  // recovered parameters
  double M = 0, Q = 0, Lambda = 0, r0 = 0, rplus = 0;
  // diagnostics
  double det = 0;                 // determinant of the (M, Lambda) linear system
  double cond = 0;                // its Frobenius condition number
  double residual_F0 = 0, residual_Fp = 0;  // |F(r0)|, |F(r+)| with recovered params
  double phase_fit_residual = 0;  // max deviation of the unwrapped phase from affine
  int weights_used = 0;
};

// Affine fit of the unwrapped argument of unimodular samples; returns the
// slope d(arg)/dx. For Theta = e^{-i beta - i(c+ - c0) x} this is c0 - c+;
// for Theta = e^{-i gamma0 + i c0 x} it is c0. Throws if the unwrapped
// phase is not affine to `tol` (e.g. wrong-regime data).
double extract_phase_slope(const std::vector<double>& x, const std::vector<cplx>& theta,
                           double* fit_residual = nullptr, double tol = 1e-6);

// Fit int W^2(w) = w^2 * Y + m^2 * Z over weights (least squares for > 2).
// Requires >= 2 distinct weights; m_f = 0 makes Z unobservable and throws.
void extract_w_integrals_dS(const std::vector<int>& weights,
                            const std::vector<double>& w2_integrals, double m_f, double& Y,
                            double& Z);

// Flat regime: per-weight constants K(w) = w^2 / r0 + (b-integrals) share
// the same additive part, so differences isolate r0.
double extract_r0_RN(const std::vector<int>& weights, const std::vector<double>& K);

RecoveryReport recover_parameters_dS(double X, double Y, double Z, double q_f);
RecoveryReport recover_parameters_RN(double c0, double r0, double q_f);

// End-to-end cosmological pipeline from transmission pairing data.
// For each weight, F(lambda) is sampled on a packet-translation grid t and
// a lambda grid; a Vandermonde fit in 1/lambda per t gives the series
// coefficients A0(t), A1(t). Then
//   arg A0(t) is affine in t with slope X, and  2 Im(A1/A0) = int W^2.
struct PairingData {
  int weight = 0;
  std::vector<double> lambdas;             // >= 3 values
  std::vector<double> shifts;              // packet translations t
  std::vector<std::vector<cplx>> F;        // F[shift][lambda]
};

PairingData make_pairing_data(const reduction::PotentialProfile& prof,
                              const reduction::KGrid& grid,
                              const asymptotics::WavePacket& psi,
                              const asymptotics::WavePacket& phi,
                              const std::vector<double>& lambdas,
                              const std::vector<double>& shifts, double dxi = 0.01);

// Series coefficients from a 1/lambda Vandermonde fit (order = #lambdas - 1).
void fit_inverse_powers(const std::vector<double>& lambdas, const std::vector<cplx>& values,
                        std::vector<cplx>& coeffs);

RecoveryReport pipeline_dS(const std::vector<PairingData>& data, double m_f, double q_f);

// Flat-regime pipeline from samples of Theta(x) and per-weight A(x).
RecoveryReport pipeline_RN(const std::vector<double>& x, const std::vector<cplx>& theta,
                           const std::vector<int>& weights,
                           const std::vector<std::vector<cplx>>& A, double q_f);

}  // namespace bhscat::recovery
