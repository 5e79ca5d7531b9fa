// Quadrature helpers: fixed-order Gauss-Legendre panels and a simple
// globally-adaptive scheme for smooth integrands.
#pragma once

#include <functional>

namespace bhscat::quad {

// 15-point Gauss-Legendre on [a,b].
double gl15(const std::function<double(double)>& f, double a, double b);

// Composite: n equal GL15 panels on [a,b].
double gl15_panels(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive bisection built on GL15 with a GL7 embedded error estimate.
// abs_tol is an absolute tolerance on the whole interval.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth = 40);

}  // namespace bhscat::quad
