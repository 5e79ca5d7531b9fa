// High-energy expansion of the transmission pairings.
//
// For compactly supported momentum packets psi, phi the pairings
//   F(lambda) = <T_R e^{i lambda x} psi, e^{i lambda x} phi>,
//   G(lambda) = <T_L e^{i lambda x} psi, e^{i lambda x} phi>
// expand for large lambda as
//   <Theta P psi, P phi> +- (1/lambda) <A P psi, P phi> + O(lambda^-2)
// with multiplication operators Theta (unimodular) and A built from the
// potential integrals. This module evaluates both sides: the predicted
// expansion from the closed-form Theta/A, and the stationary value from
// the dressed scattering matrix paired against lambda-shifted packets.
#pragma once

#include <memory>
#include <vector>

#include "bhscat/jost.hpp"
#include "bhscat/linalg.hpp"
#include "bhscat/reduction.hpp"

namespace bhscat::asymptotics {

using reduction::KGrid;
using reduction::PotentialProfile;

// Zeroth/first-order multiplication operators of the expansion. The two
// regimes differ structurally:
//   cosmological (Lambda > 0): Theta = e^{-i beta + i X x},  X = c0 - c+,
//       A = (i/2) (int W^2) Theta, and the pairing uses +-(1/lambda) A;
//   asymptotically flat (Lambda = 0): Theta = e^{-i gamma0 + i c0 x},
//       A = Theta (K + m^2 x) with K = int a^2 + int_-^0 b^2 + int_0^+ (b-m)^2,
//       and the pairing uses +-(i/2 lambda) A.
struct ReconstructionPair {
  bool has_cosmo = false;
  double beta = 0, X = 0, IW = 0;          // Lambda > 0 data
  double gamma0 = 0, c0 = 0, K = 0, m2 = 0;  // Lambda = 0 data

  cplx Theta(double x) const;
  cplx A(double x) const;
};

ReconstructionPair reconstruction_pair(const PotentialProfile& prof);

// Momentum-space packet: smooth bump-times-Gaussian scalar profile with
// compact support [center - halfwidth, center + halfwidth], common to all
// four components, times constant spinor amplitudes for the upper and
// lower pairs. `shift` translates the packet in position space, which
// multiplies the momentum profile by e^{-i s shift}.
struct WavePacket {
  double center = 0, halfwidth = 1, shift = 0;
  Vec2 up{}, dn{};

  double g(double s) const;        // real scalar profile
  double gprime(double s) const;
  cplx hat(double s) const;        // e^{-i s shift} g(s)
  cplx hat_deriv(double s) const;  // d/ds hat(s)
  double supp_lo() const { return center - halfwidth; }
  double supp_hi() const { return center + halfwidth; }
};

enum class Channel { T_R, T_L };  // T_R pairs the lower (P-) components, T_L the upper

// Predicted value of the pairing from the closed-form expansion.
cplx predicted_pairing(const ReconstructionPair& pair, const WavePacket& psi,
                       const WavePacket& phi, double lambda, Channel ch);

// Zeroth-order term alone (the lambda -> infinity limit).
cplx predicted_zeroth(const ReconstructionPair& pair, const WavePacket& psi,
                      const WavePacket& phi, Channel ch);

// Uniform table of dressed scattering matrices with cubic interpolation,
// plus the phase constants needed to route packet arguments through the
// diagonalizing transforms.
struct STable {
  double c0 = 0, cplus = 0;
  double xi_lo = 0, dxi = 0;
  std::vector<Mat2> TL, TR;

  double xi_hi() const { return xi_lo + dxi * (TL.size() - 1); }
  Mat2 interp_TL(double xi) const;
  Mat2 interp_TR(double xi) const;
};

STable make_stable(const KGrid& grid, const PotentialProfile& prof, double xi_lo,
                   double xi_hi, double dxi);

// Pairing computed from the dressed scattering matrix:
//   F(lambda) = int < S_TR(xi) psi_dn(c+ - xi - lambda), phi_dn(c0 - xi - lambda) > dxi
//   G(lambda) = int < S_TL(xi) psi_up(xi - c0 - lambda), phi_up(xi - c+ - lambda) > dxi
// Throws a coverage error naming the needed xi-range if the shifted packet
// support leaves the table.
cplx stationary_pairing(const STable& table, const WavePacket& psi, const WavePacket& phi,
                        double lambda, Channel ch);

// xi-range the table must cover for a given lambda/channel/packet pair.
void required_xi_range(const STable& table, const WavePacket& psi, const WavePacket& phi,
                       double lambda, Channel ch, double& lo, double& hi);

struct ResidualScan {
  std::vector<double> lambdas;
  std::vector<double> residuals;   // |stationary - predicted|
  std::vector<double> zeroth_gap;  // |stationary - zeroth term| (should decay like 1/lambda)
  double slope = 0, intercept = 0;  // least-squares fit of log r vs log lambda
};

ResidualScan expansion_residual_scan(const PotentialProfile& prof, const KGrid& grid,
                                     const WavePacket& psi, const WavePacket& phi,
                                     const std::vector<double>& lambdas, Channel ch,
                                     double dxi = 0.01);

// Least-squares slope/intercept of y against x (used for the log-log fits).
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& intercept);

}  // namespace bhscat::asymptotics
