#include "bhscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bhscat/errors.hpp"
#include "bhscat/quadrature.hpp"

namespace bhscat::geometry {

void BlackHoleParams::validate() const {
  if (!(M > 0)) throw ConfigError("black hole mass must be positive");
  if (!(Lambda >= 0)) throw ConfigError("cosmological constant must be >= 0");
  if (!std::isfinite(M) || !std::isfinite(Q) || !std::isfinite(Lambda))
    throw ConfigError("black hole parameters must be finite");
}

double metric_function(const BlackHoleParams& bh, double r) {
  return 1.0 - 2.0 * bh.M / r + bh.Q * bh.Q / (r * r) - bh.Lambda * r * r / 3.0;
}

double metric_derivative(const BlackHoleParams& bh, double r) {
  return 2.0 * bh.M / (r * r) - 2.0 * bh.Q * bh.Q / (r * r * r) - 2.0 * bh.Lambda * r / 3.0;
}

namespace {

// r^2 F(r) as a polynomial; its positive roots are the horizon radii.
double horizon_poly(const BlackHoleParams& bh, double r) {
  return r * r - 2.0 * bh.M * r + bh.Q * bh.Q - bh.Lambda / 3.0 * r * r * r * r;
}

double refine_root(const BlackHoleParams& bh, double lo, double hi) {
  double flo = horizon_poly(bh, lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double fm = horizon_poly(bh, mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

HorizonData horizon_data(const BlackHoleParams& bh) {
  bh.validate();
  HorizonData hz;

  if (bh.Lambda == 0.0) {
    double disc = bh.M * bh.M - bh.Q * bh.Q;
    if (!(disc > 0))
      throw ConfigError("no exterior region: |Q| >= M with Lambda = 0 (extremal or naked)");
    double s = std::sqrt(disc);
    hz.r_0 = bh.M + s;
    hz.r_minus = bh.Q * bh.Q / hz.r_0;  // M - s, in cancellation-free form
    hz.kappa_0 = 0.5 * metric_derivative(bh, hz.r_0);
    hz.kappa_plus = 0.0;
    return hz;
  }

  // Lambda > 0: scan r^2 F(r) for sign changes on (0, sqrt(3/Lambda)].
  double R = std::sqrt(3.0 / bh.Lambda);
  std::vector<double> grid;
  for (int i = 0; i < 800; ++i)  // log-spaced part resolves a small Cauchy horizon
    grid.push_back(R * std::pow(10.0, -10.0 + 10.0 * i / 799.0));
  for (int i = 1; i <= 4000; ++i) grid.push_back(R * i / 4000.0);
  std::sort(grid.begin(), grid.end());

  std::vector<double> roots;
  if (bh.Q == 0.0) roots.push_back(0.0);  // exact root at r = 0
  double prev_r = grid[0], prev_f = horizon_poly(bh, prev_r);
  for (size_t i = 1; i < grid.size(); ++i) {
    double f = horizon_poly(bh, grid[i]);
    if ((f > 0) != (prev_f > 0)) roots.push_back(refine_root(bh, prev_r, grid[i]));
    prev_r = grid[i];
    prev_f = f;
  }

  if (roots.size() != 3) {
    std::ostringstream os;
    os << "no exterior region: expected three horizon radii, found " << roots.size()
       << " (M=" << bh.M << " Q=" << bh.Q << " Lambda=" << bh.Lambda << ")";
    throw ConfigError(os.str());
  }
  std::sort(roots.begin(), roots.end());
  hz.r_minus = roots[0];
  hz.r_0 = roots[1];
  hz.r_plus = roots[2];
  hz.r_neg = -(roots[0] + roots[1] + roots[2]);  // quartic roots sum to zero

  double sep = std::min(hz.r_0 - hz.r_minus, hz.r_plus - hz.r_0);
  if (sep < 1e-8 * hz.r_0)
    throw ConfigError("degenerate horizons: exterior region collapses (near-extremal)");

  hz.kappa_0 = 0.5 * metric_derivative(bh, hz.r_0);
  hz.kappa_plus = 0.5 * metric_derivative(bh, hz.r_plus);
  if (!(hz.kappa_0 > 0) || !(hz.kappa_plus < 0))
    throw ConfigError("surface gravities have unexpected signs; horizon ordering is wrong");
  return hz;
}

ReggeWheelerMap::ReggeWheelerMap(const BlackHoleParams& bh, MapOptions opt)
    : bh_(bh), hz_(horizon_data(bh)) {
  const double r0 = hz_.r_0;

  if (hz_.has_cosmological()) {
    r_anchor_ = 0.5 * (hz_.r_0 + hz_.r_plus);
    lin_coeff_ = 0.0;
    log_coeff_0_ = 1.0 / (2.0 * hz_.kappa_0);
    log_coeff_p_ = 1.0 / (2.0 * hz_.kappa_plus);
    log_coeff_m_ = 0.0;
  } else {
    r_anchor_ = 2.0 * r0;
    // Exact partial fractions of 1/F = r^2 / ((r-r_0)(r-r_minus)):
    // 1 + r_0^2/((r_0-r_minus)(r-r_0)) + r_minus^2/((r_minus-r_0)(r-r_minus)).
    lin_coeff_ = 1.0;
    log_coeff_0_ = r0 * r0 / (r0 - hz_.r_minus);
    log_coeff_m_ = hz_.r_minus * hz_.r_minus / (hz_.r_minus - r0);
    log_coeff_p_ = 0.0;
  }

  // --- node ladder: geometric clustering toward the horizons, uniform middle
  const double G = opt.cluster_ratio;
  std::vector<double> nodes;
  nodes.push_back(r0 * (1.0 + opt.edge_rel));

  if (hz_.has_cosmological()) {
    const double span_l = r_anchor_ - r0, span_r = hz_.r_plus - r_anchor_;
    double d = nodes.back() - r0;
    while (d * G < 0.25 * span_l) {
      d *= G;
      nodes.push_back(r0 + d);
    }
    int half = std::max(4, opt.mid_panels / 2);
    double start = nodes.back();
    for (int i = 1; i <= half; ++i) nodes.push_back(start + (r_anchor_ - start) * i / half);
    // right side, built from the cosmological horizon inward
    std::vector<double> right;
    right.push_back(hz_.r_plus * (1.0 - opt.edge_rel) - 0.0);
    double e = hz_.r_plus - right.back();
    while (e * G < 0.25 * span_r) {
      e *= G;
      right.push_back(hz_.r_plus - e);
    }
    double rstart = right.back();
    std::reverse(right.begin(), right.end());
    for (int i = 1; i <= half; ++i) nodes.push_back(r_anchor_ + (rstart - r_anchor_) * i / half);
    nodes.pop_back();  // rstart itself comes from `right`
    nodes.insert(nodes.end(), right.begin(), right.end());
  } else {
    double r_hi = opt.r_max_over_r0 * r0;
    double d = nodes.back() - r0;
    while (d * G < 0.5 * r0) {
      d *= G;
      nodes.push_back(r0 + d);
    }
    // uniform zone through the anchor at 2 r_0
    double start = nodes.back();
    int n1 = std::max(4, opt.mid_panels / 2);
    for (int i = 1; i <= n1; ++i) nodes.push_back(start + (r_anchor_ - start) * i / n1);
    int n2 = std::max(4, opt.mid_panels / 2);
    for (int i = 1; i <= n2; ++i) nodes.push_back(r_anchor_ + (4.0 * r0 - r_anchor_) * i / n2);
    // log-spaced out to the configured large radius
    double r = 4.0 * r0;
    while (r * 1.08 < r_hi) {
      r *= 1.08;
      nodes.push_back(r);
    }
    nodes.push_back(r_hi);
  }

  nodes_r_ = std::move(nodes);

  // --- cumulative integral of the smooth remainder, then anchor shift
  H_.assign(nodes_r_.size(), 0.0);
  auto h = [this](double r) { return h_smooth(r); };
  for (size_t i = 1; i < nodes_r_.size(); ++i)
    H_[i] = H_[i - 1] + quad::gl15(h, nodes_r_[i - 1], nodes_r_[i]);

  size_t ia = std::lower_bound(nodes_r_.begin(), nodes_r_.end(), r_anchor_) - nodes_r_.begin();
  // r_anchor is a node by construction; guard against rounding
  if (std::abs(nodes_r_[ia] - r_anchor_) > 1e-9 * r_anchor_)
    throw QualityError("internal: anchor radius is not a table node");
  offset_ = 0.0;
  offset_ = -(x_singular(nodes_r_[ia]) + H_[ia]);

  nodes_x_.resize(nodes_r_.size());
  for (size_t i = 0; i < nodes_r_.size(); ++i)
    nodes_x_[i] = x_singular(nodes_r_[i]) + H_[i] + offset_;
}

double ReggeWheelerMap::F(double r) const {
  if (hz_.has_cosmological()) {
    return -(bh_.Lambda / 3.0) * (r - hz_.r_neg) * (r - hz_.r_minus) * (r - hz_.r_0) *
           (r - hz_.r_plus) / (r * r);
  }
  return (r - hz_.r_minus) * (r - hz_.r_0) / (r * r);
}

double ReggeWheelerMap::dF_dr(double r) const { return metric_derivative(bh_, r); }

double ReggeWheelerMap::x_singular(double r) const {
  double x = lin_coeff_ * r + log_coeff_0_ * std::log(r - hz_.r_0);
  if (log_coeff_p_ != 0.0) x += log_coeff_p_ * std::log(hz_.r_plus - r);
  if (log_coeff_m_ != 0.0) x += log_coeff_m_ * std::log(r - hz_.r_minus);
  return x;
}

double ReggeWheelerMap::h_smooth(double r) const {
  double s = lin_coeff_ + log_coeff_0_ / (r - hz_.r_0);
  if (log_coeff_p_ != 0.0) s += log_coeff_p_ / (r - hz_.r_plus);
  if (log_coeff_m_ != 0.0) s += log_coeff_m_ / (r - hz_.r_minus);
  return 1.0 / F(r) - s;
}

double ReggeWheelerMap::x_of_r_unchecked(double r) const {
  size_t k = std::upper_bound(nodes_r_.begin(), nodes_r_.end(), r) - nodes_r_.begin();
  if (k > 0) --k;
  if (k >= nodes_r_.size() - 1) k = nodes_r_.size() - 2;
  auto h = [this](double rr) { return h_smooth(rr); };
  return x_singular(r) + H_[k] + quad::gl15(h, nodes_r_[k], r) + offset_;
}

double ReggeWheelerMap::x_of_r(double r) const {
  if (!(r >= nodes_r_.front() && r <= nodes_r_.back())) {
    std::ostringstream os;
    os << "radius " << r << " outside tabulated range [" << nodes_r_.front() << ", "
       << nodes_r_.back() << "] (horizon approached closer than the edge cutoff)";
    throw ConfigError(os.str());
  }
  return x_of_r_unchecked(r);
}

double ReggeWheelerMap::r_of_x(double x) const {
  if (!(x >= nodes_x_.front() && x <= nodes_x_.back())) {
    std::ostringstream os;
    os << "tortoise coordinate " << x << " outside tabulated range [" << nodes_x_.front()
       << ", " << nodes_x_.back() << "]";
    throw ConfigError(os.str());
  }
  size_t k = std::upper_bound(nodes_x_.begin(), nodes_x_.end(), x) - nodes_x_.begin();
  if (k > 0) --k;
  if (k >= nodes_x_.size() - 1) k = nodes_x_.size() - 2;

  double x0 = nodes_x_[k], x1 = nodes_x_[k + 1];
  double r0 = nodes_r_[k], r1 = nodes_r_[k + 1];
  // cubic Hermite initial guess using dr/dx = F(r) at the panel nodes
  double dx = x1 - x0, t = (x - x0) / dx;
  double m0 = F(r0) * dx, m1 = F(r1) * dx;
  double t2 = t * t, t3 = t2 * t;
  double r = (2 * t3 - 3 * t2 + 1) * r0 + (t3 - 2 * t2 + t) * m0 +
             (-2 * t3 + 3 * t2) * r1 + (t3 - t2) * m1;
  r = std::min(std::max(r, r0), r1);

  double lo = r0, hi = r1;
  for (int it = 0; it < 100; ++it) {
    double err = x_of_r_unchecked(r) - x;
    if (std::abs(err) <= 1e-13 * (1.0 + std::abs(x))) return r;
    if (err > 0)
      hi = r;
    else
      lo = r;
    double step = -err * F(r);  // Newton: dx/dr = 1/F
    double rn = r + step;
    if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
    if (rn == r) return r;
    r = rn;
  }
  return r;
}

}  // namespace bhscat::geometry
