// Reduction of the charged massive Dirac equation on the black hole
// exterior to a one-dimensional system on the line: per-harmonic potential
// profiles a, b, c, the phase integrals that absorb the long-range charge
// term, and the off-diagonal 2x2 reduced potential k(x).
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "bhscat/geometry.hpp"
#include "bhscat/linalg.hpp"

namespace bhscat::reduction {

struct FieldParams {
  double mass = 0.0;    // field mass m
  double charge = 0.0;  // field charge q

  void validate() const;
};

// Cumulative integral of a smooth function over a fixed node ladder;
// evaluation inside the ladder adds a partial Gauss-Legendre panel.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, std::vector<double> nodes);
  double eval(double r) const;  // integral from nodes.front() to r
  double total() const { return cum_.back(); }

 private:
  std::function<double(double)> f_;
  std::vector<double> nodes_;
  std::vector<double> cum_;
};

// Per-harmonic potential profile at angular weight w = l + 1/2 in {1,2,...}.
//
//   a_w(x) = w sqrt(F(r)) / r      (taken positive; only a_w^2 and the
//                                   anticommutation structure are physical)
//   b(x)   = m sqrt(F(r))
//   c(x)   = q Q / r
//
// Outside a safe window around the horizons the evaluators switch to the
// exact exponential tails (rate kappa_0 at -inf, kappa_plus at +inf), which
// extends the usable x-range beyond what double precision can represent in r.
class PotentialProfile {
 public:
  PotentialProfile(std::shared_ptr<const geometry::ReggeWheelerMap> map,
                   FieldParams field, int weight);

  double a_w(double x) const;
  double b(double x) const;
  double c(double x) const;
  double W2(double x) const { double aa = a_w(x), bb = b(x); return aa * aa + bb * bb; }

  double c0() const { return c0_; }
  double cplus() const { return cplus_; }  // throws for Lambda == 0
  // beta = int_{-inf}^{0} (c - c0) + int_{0}^{inf} (c - cplus)   (Lambda > 0)
  double beta() const;

  // C^-(x) = int_{-inf}^{x} (c - c0) ds + c0 x
  double C_minus(double x) const;

  // Reduced potential block: k(x) = e^{2i C^-(x)} [[-i b, a_w], [-a_w, i b]].
  Mat2 k(double x) const;

  const geometry::ReggeWheelerMap& map() const { return *map_; }
  const FieldParams& field() const { return field_; }
  int weight() const { return weight_; }
  double x_edge_lo() const { return x_edge_lo_; }
  double x_edge_hi() const { return x_edge_hi_; }

 private:
  std::shared_ptr<const geometry::ReggeWheelerMap> map_;
  FieldParams field_;
  int weight_;
  bool has_cosmo_;
  double c0_ = 0, cplus_ = 0, beta_ = 0;

  // exponential-tail continuation data
  double x_edge_lo_ = 0, x_edge_hi_ = 0;
  double a_lo_ = 0, b_lo_ = 0, s_lo_ = 0;  // values of a_w, b, c - c0 at the low edge
  double a_hi_ = 0, b_hi_ = 0, s_hi_ = 0;  // values of a_w, b, c - cplus at the high edge
  double k0_ = 0, kp_ = 0;                 // surface gravities (decay rates)
  double Jl_edge_lo_ = 0, Jr_edge_hi_ = 0;

  CumulativeIntegral Jleft_;   // int_{r_0}^{r} (c - c0)/F,   r in [r_lo, r_anchor]
  CumulativeIntegral Jright_;  // int_{r_anchor}^{r} (c - c0 or cplus)/F on the outer side
  double r_anchor_ = 0;
};

// Uniformly sampled potential data for the stationary solvers: values of
// (a_w, b, C^-) at spacing dx/2 so that an integrator with step dx sees
// nodes and midpoints. The range [x_lo, x_hi] is chosen so the neglected
// tail mass of ||k|| is below tail_tol.
struct KGrid {
  double x_lo = 0, x_hi = 0, step = 0;  // integrator step; samples at step/2
  std::vector<double> a, b, C;          // size 2*n_steps + 1
  int n_steps = 0;

  double x_at(int half_index) const { return x_lo + 0.5 * step * half_index; }
  Mat2 k_at(int half_index) const;
  double W_at(int half_index) const {
    return std::sqrt(a[half_index] * a[half_index] + b[half_index] * b[half_index]);
  }
};

KGrid build_kgrid(const PotentialProfile& prof, double step, double tail_tol);

// Closed-form value of int_R (a_w^2 + b^2) dx for Lambda > 0:
//   w^2 (1/r_0 - 1/r_plus) + m^2 (r_plus - r_0).
double w2_integral_closed_dS(const geometry::HorizonData& hz, const FieldParams& f, int w);

// Independent quadrature of the same integral in the x variable.
double w2_integral_quadrature(const PotentialProfile& prof);

// Lambda == 0 integrals entering the high-energy expansion:
//   int_R a_w^2 = w^2 / r_0,  int_{-inf}^0 b^2,  int_0^inf (b - m)^2.
struct RNIntegrals {
  double int_a2 = 0;
  double int_b2_left = 0;
  double int_bm2_right = 0;
};
RNIntegrals rn_integrals_closed(const geometry::HorizonData& hz, const FieldParams& f, int w,
                                const geometry::BlackHoleParams& bh);
RNIntegrals rn_integrals_quadrature(const PotentialProfile& prof);

}  // namespace bhscat::reduction
