#include "bhscat/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bhscat/errors.hpp"
#include "bhscat/quadrature.hpp"

namespace bhscat::reduction {

void FieldParams::validate() const {
  if (!(mass >= 0)) throw ConfigError("field mass must be >= 0");
  if (!std::isfinite(mass) || !std::isfinite(charge))
    throw ConfigError("field parameters must be finite");
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       std::vector<double> nodes)
    : f_(std::move(f)), nodes_(std::move(nodes)) {
  cum_.assign(nodes_.size(), 0.0);
  for (size_t i = 1; i < nodes_.size(); ++i)
    cum_[i] = cum_[i - 1] + quad::gl15(f_, nodes_[i - 1], nodes_[i]);
}

double CumulativeIntegral::eval(double r) const {
  size_t k = std::upper_bound(nodes_.begin(), nodes_.end(), r) - nodes_.begin();
  if (k > 0) --k;
  if (k >= nodes_.size() - 1) k = nodes_.size() - 2;
  return cum_[k] + quad::gl15(f_, nodes_[k], r);
}

namespace {

std::vector<double> uniform_nodes(double a, double b, int n) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
  return v;
}

std::vector<double> log_nodes(double a, double b, int n) {
  std::vector<double> v(n + 1);
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i <= n; ++i) v[i] = std::exp(la + (lb - la) * i / n);
  return v;
}

}  // namespace

PotentialProfile::PotentialProfile(std::shared_ptr<const geometry::ReggeWheelerMap> map,
                                   FieldParams field, int weight)
    : map_(std::move(map)), field_(field), weight_(weight) {
  field_.validate();
  if (weight_ < 1) throw ConfigError("angular weight w = l + 1/2 must be a positive integer");

  const auto& hz = map_->horizons();
  const auto& bh = map_->params();
  has_cosmo_ = hz.has_cosmological();
  k0_ = hz.kappa_0;
  kp_ = hz.kappa_plus;
  r_anchor_ = map_->r_anchor();
  c0_ = field_.charge * bh.Q / hz.r_0;
  cplus_ = has_cosmo_ ? field_.charge * bh.Q / hz.r_plus : 0.0;

  const double qQ = field_.charge * bh.Q;
  const double r0 = hz.r_0, rp = hz.r_plus;

  // (c - c0)/F with the vanishing factor (r - r_0) cancelled analytically.
  auto g_left = [this, qQ, r0, &hz, &bh](double rho) {
    double G0;  // F(rho)/(rho - r_0), from the factored metric function
    if (has_cosmo_)
      G0 = -(bh.Lambda / 3.0) * (rho - hz.r_neg) * (rho - hz.r_minus) * (rho - hz.r_plus) /
           (rho * rho);
    else
      G0 = (rho - hz.r_minus) / (rho * rho);
    return -qQ / (rho * r0 * G0);
  };

  double r_lo_safe = r0 * (1.0 + 1e-8);
  if (r_lo_safe < map_->r_min()) r_lo_safe = map_->r_min();
  double r_hi_safe;
  if (has_cosmo_) {
    r_hi_safe = rp * (1.0 - 1e-8);
    if (r_hi_safe > map_->r_max()) r_hi_safe = map_->r_max();
  } else {
    r_hi_safe = map_->r_max();
  }

  Jleft_ = CumulativeIntegral(g_left, uniform_nodes(r0, r_anchor_, 96));

  if (has_cosmo_) {
    // (c - cplus)/F with (r - r_plus) cancelled analytically.
    auto g_right = [qQ, rp, &hz, &bh](double rho) {
      double Gp = -(bh.Lambda / 3.0) * (rho - hz.r_neg) * (rho - hz.r_minus) *
                  (rho - hz.r_0) / (rho * rho);
      return -qQ / (rho * rp * Gp);
    };
    Jright_ = CumulativeIntegral(g_right, uniform_nodes(r_anchor_, rp, 96));
    beta_ = Jleft_.total() + Jright_.total();
  } else {
    auto g_right = [this, qQ, r0, &hz](double rho) {
      double G0 = (rho - hz.r_minus) / (rho * rho);
      return -qQ / (rho * r0 * G0);
    };
    Jright_ = CumulativeIntegral(g_right, log_nodes(r_anchor_, r_hi_safe, 192));
    beta_ = 0.0;
  }

  x_edge_lo_ = map_->x_of_r(r_lo_safe);
  x_edge_hi_ = map_->x_of_r(r_hi_safe);

  double Flo = map_->F(r_lo_safe), Fhi = map_->F(r_hi_safe);
  a_lo_ = weight_ * std::sqrt(Flo) / r_lo_safe;
  b_lo_ = field_.mass * std::sqrt(Flo);
  s_lo_ = qQ / r_lo_safe - c0_;
  a_hi_ = weight_ * std::sqrt(Fhi) / r_hi_safe;
  b_hi_ = field_.mass * std::sqrt(Fhi);
  s_hi_ = has_cosmo_ ? qQ / r_hi_safe - cplus_ : 0.0;
  Jl_edge_lo_ = Jleft_.eval(r_lo_safe);
  Jr_edge_hi_ = 0.0;  // unused; kept for clarity
}

double PotentialProfile::a_w(double x) const {
  if (x < x_edge_lo_) return a_lo_ * std::exp(k0_ * (x - x_edge_lo_));
  if (has_cosmo_ && x > x_edge_hi_) return a_hi_ * std::exp(kp_ * (x - x_edge_hi_));
  double r = map_->r_of_x(x);
  return weight_ * std::sqrt(std::max(0.0, map_->F(r))) / r;
}

double PotentialProfile::b(double x) const {
  if (x < x_edge_lo_) return b_lo_ * std::exp(k0_ * (x - x_edge_lo_));
  if (has_cosmo_ && x > x_edge_hi_) return b_hi_ * std::exp(kp_ * (x - x_edge_hi_));
  double r = map_->r_of_x(x);
  return field_.mass * std::sqrt(std::max(0.0, map_->F(r)));
}

double PotentialProfile::c(double x) const {
  if (x < x_edge_lo_) return c0_ + s_lo_ * std::exp(2.0 * k0_ * (x - x_edge_lo_));
  if (has_cosmo_ && x > x_edge_hi_)
    return cplus_ + s_hi_ * std::exp(2.0 * kp_ * (x - x_edge_hi_));
  double r = map_->r_of_x(x);
  return field_.charge * map_->params().Q / r;
}

double PotentialProfile::beta() const {
  if (!has_cosmo_)
    throw ConfigError("beta is defined only for Lambda > 0 (two asymptotic charges)");
  return beta_;
}

double PotentialProfile::C_minus(double x) const {
  if (x < x_edge_lo_) {
    double t = std::exp(2.0 * k0_ * (x - x_edge_lo_));
    return c0_ * x + Jl_edge_lo_ - s_lo_ / (2.0 * k0_) * (1.0 - t);
  }
  if (has_cosmo_ && x > x_edge_hi_) {
    double t = std::exp(2.0 * kp_ * (x - x_edge_hi_));
    return beta_ + cplus_ * x + s_hi_ / (2.0 * kp_) * t;
  }
  double r = map_->r_of_x(x);
  if (r <= r_anchor_) return c0_ * x + Jleft_.eval(r);
  if (has_cosmo_) return beta_ + cplus_ * x - (Jright_.total() - Jright_.eval(r));
  return c0_ * x + Jleft_.total() + Jright_.eval(r);
}

Mat2 PotentialProfile::k(double x) const {
  double aw = a_w(x), bb = b(x);
  cplx ph = std::exp(cplx(0.0, 2.0 * C_minus(x)));
  return Mat2{{-I_UNIT * bb * ph, aw * ph, -aw * ph, I_UNIT * bb * ph}};
}

Mat2 KGrid::k_at(int half_index) const {
  double aw = a[half_index], bb = b[half_index];
  cplx ph = std::exp(cplx(0.0, 2.0 * C[half_index]));
  return Mat2{{-I_UNIT * bb * ph, aw * ph, -aw * ph, I_UNIT * bb * ph}};
}

KGrid build_kgrid(const PotentialProfile& prof, double step, double tail_tol) {
  if (!prof.map().horizons().has_cosmological())
    throw ConfigError("stationary solver grids require Lambda > 0");
  if (!(step > 0) || !(tail_tol > 0)) throw ConfigError("kgrid step and tail_tol must be > 0");

  const double k0 = prof.map().horizons().kappa_0;
  const double kp = prof.map().horizons().kappa_plus;

  // ||k(x)||_2 = sqrt(a^2 + b^2); left tail mass ~ ||k(x)||/kappa_0.
  double xe_lo = prof.x_edge_lo();
  double W_lo = std::sqrt(prof.W2(xe_lo));
  double x_lo = xe_lo;
  if (W_lo / k0 > tail_tol) x_lo = xe_lo + std::log(tail_tol * k0 / W_lo) / k0;

  double xe_hi = prof.x_edge_hi();
  double W_hi = std::sqrt(prof.W2(xe_hi));
  double x_hi = xe_hi;
  if (W_hi / (-kp) > tail_tol) x_hi = xe_hi + std::log(tail_tol * (-kp) / W_hi) / kp;

  KGrid g;
  g.n_steps = static_cast<int>(std::ceil((x_hi - x_lo) / step));
  g.step = step;
  g.x_lo = x_lo;
  g.x_hi = x_lo + g.n_steps * step;
  int n = 2 * g.n_steps + 1;
  g.a.resize(n);
  g.b.resize(n);
  g.C.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = g.x_at(i);
    g.a[i] = prof.a_w(x);
    g.b[i] = prof.b(x);
    g.C[i] = prof.C_minus(x);
  }
  return g;
}

double w2_integral_closed_dS(const geometry::HorizonData& hz, const FieldParams& f, int w) {
  if (!hz.has_cosmological()) throw ConfigError("closed-form W^2 integral requires Lambda > 0");
  return static_cast<double>(w) * w * (1.0 / hz.r_0 - 1.0 / hz.r_plus) +
         f.mass * f.mass * (hz.r_plus - hz.r_0);
}

double w2_integral_quadrature(const PotentialProfile& prof) {
  if (!prof.map().horizons().has_cosmological())
    throw ConfigError("x-space W^2 quadrature requires Lambda > 0");
  const double k0 = prof.map().horizons().kappa_0;
  const double kp = prof.map().horizons().kappa_plus;
  double xlo = prof.x_edge_lo(), xhi = prof.x_edge_hi();
  auto f = [&prof](double x) { return prof.W2(x); };
  double bulk = quad::adaptive(f, xlo, 0.0, 1e-12) + quad::adaptive(f, 0.0, xhi, 1e-12);
  // exponential tails: W^2 decays at rate 2 kappa
  double tail = prof.W2(xlo) / (2.0 * k0) + prof.W2(xhi) / (2.0 * (-kp));
  return bulk + tail;
}

RNIntegrals rn_integrals_closed(const geometry::HorizonData& hz, const FieldParams& f, int w,
                                const geometry::BlackHoleParams& bh) {
  if (hz.has_cosmological()) throw ConfigError("these integrals apply to Lambda == 0");
  RNIntegrals out;
  out.int_a2 = static_cast<double>(w) * w / hz.r_0;
  out.int_b2_left = f.mass * f.mass * hz.r_0;  // anchor at r = 2 r_0: m^2 (2r_0 - r_0)
  // int_0^inf (b - m)^2 dx = m^2 int_{2 r_0}^inf (sqrt(F)-1)^2 / F dr,
  // mapped to u = 1/r where the integrand is smooth down to u = 0.
  double m2 = f.mass * f.mass;
  auto g = [&bh](double u) {
    double F = 1.0 - 2.0 * bh.M * u + bh.Q * bh.Q * u * u;
    double s = std::sqrt(F) - 1.0;
    if (u < 1e-7) {  // series to avoid cancellation: sqrt(F)-1 ~ -Mu + ...
      double t = -2.0 * bh.M * u + bh.Q * bh.Q * u * u;
      s = t * (0.5 - t * (0.125 - t * 0.0625));
    }
    return s * s / (F * u * u);
  };
  out.int_bm2_right = m2 * quad::adaptive(g, 0.0, 1.0 / (2.0 * hz.r_0), 1e-13);
  return out;
}

RNIntegrals rn_integrals_quadrature(const PotentialProfile& prof) {
  if (prof.map().horizons().has_cosmological())
    throw ConfigError("these integrals apply to Lambda == 0");
  const double k0 = prof.map().horizons().kappa_0;
  const double m = prof.field().mass;
  double xlo = prof.x_edge_lo(), xhi = prof.x_edge_hi();
  RNIntegrals out;

  auto a2 = [&prof](double x) { double a = prof.a_w(x); return a * a; };
  double w2 = static_cast<double>(prof.weight()) * prof.weight();
  // right tail of int a^2: exactly w^2 / r at the cutoff radius
  double r_hi = prof.map().r_of_x(xhi);
  out.int_a2 = quad::adaptive(a2, xlo, 0.0, 1e-12) + quad::adaptive(a2, 0.0, xhi, 1e-12) +
               a2(xlo) / (2.0 * k0) + w2 / r_hi;

  auto b2 = [&prof](double x) { double b = prof.b(x); return b * b; };
  out.int_b2_left = quad::adaptive(b2, xlo, 0.0, 1e-12) + b2(xlo) / (2.0 * k0);

  auto bm2 = [&prof, m](double x) { double d = prof.b(x) - m; return d * d; };
  // right tail: (sqrt(F)-1)^2/F = M^2/r^2 + M(3M^2-Q^2)/r^3 + O(r^-4)
  double M = prof.map().params().M, Q = prof.map().params().Q;
  double tail = m * m * (M * M / r_hi + M * (3.0 * M * M - Q * Q) / (2.0 * r_hi * r_hi));
  out.int_bm2_right = quad::adaptive(bm2, 0.0, xhi, 1e-12) + tail;
  return out;
}

}  // namespace bhscat::reduction
