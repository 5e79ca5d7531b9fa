#include "bhscat/quadrature.hpp"

#include <cmath>
#include <cstdlib>

namespace bhscat::quad {

namespace {

// Gauss-Legendre 15-point nodes/weights on [-1,1] (symmetric; node 0 first).
const double kX15[8] = {0.0,
                        0.2011940939974345,
                        0.3941513470775634,
                        0.5709721726085388,
                        0.7244177313601701,
                        0.8482065834104272,
                        0.9372733924007060,
                        0.9879925180204854};
const double kW15[8] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                        0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                        0.0703660474881081, 0.0307532419961173};

// Gauss-Legendre 7-point, used only for the adaptive error estimate.
const double kX7[4] = {0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
const double kW7[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                       0.1294849661688697};

double gl7(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kW7[0] * f(c);
  for (int i = 1; i < 4; ++i) s += kW7[i] * (f(c + h * kX7[i]) + f(c - h * kX7[i]));
  return s * h;
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, int max_depth) {
  double coarse = gl7(f, a, b);
  double fine = gl15(f, a, b);
  if (std::abs(fine - coarse) <= tol || depth >= max_depth) return fine;
  double m = 0.5 * (a + b);
  return adaptive_rec(f, a, m, tol * 0.5, depth + 1, max_depth) +
         adaptive_rec(f, m, b, tol * 0.5, depth + 1, max_depth);
}

}  // namespace

double gl15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kW15[0] * f(c);
  for (int i = 1; i < 8; ++i) s += kW15[i] * (f(c + h * kX15[i]) + f(c - h * kX15[i]));
  return s * h;
}

double gl15_panels(const std::function<double(double)>& f, double a, double b, int n) {
  double s = 0, h = (b - a) / n;
  for (int i = 0; i < n; ++i) s += gl15(f, a + i * h, a + (i + 1) * h);
  return s;
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth) {
  return adaptive_rec(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace bhscat::quad
