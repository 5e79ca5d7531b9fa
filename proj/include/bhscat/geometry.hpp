// Exterior geometry of a (de Sitter-)Reissner-Nordstrom black hole:
// metric function, horizon structure, surface gravities, and the
// tortoise coordinate map x(r) with dx/dr = 1/F(r).
#pragma once

#include <limits>
#include <vector>

namespace bhscat::geometry {

struct BlackHoleParams {
  double M = 1.0;      // mass
  double Q = 0.0;      // charge
  double Lambda = 0.0; // cosmological constant (>= 0)

  void validate() const;  // throws ConfigError on nonsense input
};

// Horizon radii and surface gravities. For Lambda == 0 there is no
// cosmological horizon: r_plus = +inf, kappa_plus = 0.
struct HorizonData {
  double r_minus = 0;   // Cauchy horizon (0 when Q == 0)
  double r_0 = 0;       // event horizon
  double r_plus = std::numeric_limits<double>::infinity();  // cosmological horizon
  double r_neg = 0;     // negative quartic root (Lambda > 0 only), = -(r_minus+r_0+r_plus)
  double kappa_0 = 0;   // surface gravity at r_0 (> 0)
  double kappa_plus = 0;  // surface gravity at r_plus (< 0 when Lambda > 0)

  bool has_cosmological() const { return r_plus < std::numeric_limits<double>::infinity(); }
};

double metric_function(const BlackHoleParams& bh, double r);
double metric_derivative(const BlackHoleParams& bh, double r);

// Finds the horizon radii by bracketing the roots of r^2 F(r) and refining
// with bisection + Newton. Throws ConfigError when the exterior region
// r_0 < r < r_plus does not exist (missing or degenerate roots).
HorizonData horizon_data(const BlackHoleParams& bh);

struct MapOptions {
  // Relative offset from the horizons at which the tabulated range stops.
  double edge_rel = 1e-12;
  // Outer radius (in units of r_0) for Lambda == 0, where there is no
  // cosmological horizon to bound the range.
  double r_max_over_r0 = 200.0;
  // Geometric growth factor of panel widths away from the horizons.
  double cluster_ratio = 1.15;
  // Number of uniform panels across the middle of the range.
  int mid_panels = 64;
};

// Tortoise map. x is anchored so that x(r_anchor) = 0 with
// r_anchor = (r_0 + r_plus)/2 (Lambda > 0) or 2 r_0 (Lambda == 0).
//
// Internally x(r) = [log terms capturing the simple poles of 1/F at the
// horizons] + smooth remainder integrated by Gauss-Legendre panels, so the
// map stays accurate arbitrarily close to the horizons.
class ReggeWheelerMap {
 public:
  ReggeWheelerMap(const BlackHoleParams& bh, MapOptions opt = {});

  double x_of_r(double r) const;  // throws ConfigError outside (r_lo, r_hi)
  double r_of_x(double x) const;  // throws ConfigError outside [x_min, x_max]

  // Metric function in factored form (product over the known roots);
  // stable down to machine distance from the horizons.
  double F(double r) const;
  double dF_dr(double r) const;

  const BlackHoleParams& params() const { return bh_; }
  const HorizonData& horizons() const { return hz_; }
  double r_min() const { return nodes_r_.front(); }
  double r_max() const { return nodes_r_.back(); }
  double x_min() const { return nodes_x_.front(); }
  double x_max() const { return nodes_x_.back(); }
  double r_anchor() const { return r_anchor_; }

 private:
  double x_singular(double r) const;  // closed-form log part
  double h_smooth(double r) const;    // 1/F minus the log-part derivative
  double x_of_r_unchecked(double r) const;

  BlackHoleParams bh_;
  HorizonData hz_;
  double r_anchor_ = 0;
  double offset_ = 0;         // additive constant fixing x(r_anchor) = 0
  double lin_coeff_ = 0;      // coefficient of the linear term (1 for Lambda == 0)
  double log_coeff_0_ = 0;    // coefficient of log(r - r_0)
  double log_coeff_p_ = 0;    // coefficient of log(r_plus - r)   (Lambda > 0)
  double log_coeff_m_ = 0;    // coefficient of log(r - r_minus)  (Lambda == 0, Q != 0)
  std::vector<double> nodes_r_;
  std::vector<double> nodes_x_;
  std::vector<double> H_;     // cumulative integral of the smooth remainder
};

}  // namespace bhscat::geometry
