#pragma once

// Independent reference computations for tests. Nothing here calls the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double alpha(double m, double beta, double rho) { return (2 * beta + rho) / (1 - m); }

inline double w_inf(int n, double m, double beta, double rho) {
  const double a = alpha(m, beta, rho);
  return 2.0 * (n - 1) * (n * (1 - m) - 2) / ((1 - m) * (a * (1 - m) - 2 * beta));
}

// Left side of the profile ODE for v given as a function, with derivatives of
// v^m taken by central differences on a log-spaced stencil.
inline double ode_lhs_fd(int n, double m, double beta, double rho,
                         const std::function<double(double)>& v, double r) {
  const double h = 1e-4 * r;
  auto V = [&](double x) { return std::pow(v(x), m); };
  const double Vp = (V(r + h) - V(r - h)) / (2 * h);
  const double Vpp = (V(r + h) - 2 * V(r) + V(r - h)) / (h * h);
  const double vp = (v(r + h) - v(r - h)) / (2 * h);
  return (n - 1) / m * (Vpp + (n - 1) / r * Vp) + alpha(m, beta, rho) * v(r) + beta * r * vp;
}

// Exact left side for a power law v = C r^-k, using (v^m)' and (v^m)'' by hand.
inline double ode_lhs_power(int n, double m, double beta, double rho, double C, double k,
                            double r) {
  const double Cm = std::pow(C, m);
  const double q = k * m;
  const double Vp = -q * Cm * std::pow(r, -q - 1);
  const double Vpp = q * (q + 1) * Cm * std::pow(r, -q - 2);
  const double v = C * std::pow(r, -k);
  const double vp = -k * C * std::pow(r, -k - 1);
  return (n - 1) / m * (Vpp + (n - 1) / r * Vp) + alpha(m, beta, rho) * v + beta * r * vp;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace oracle
