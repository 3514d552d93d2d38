// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tensorfem {

namespace {

constexpr double newton_tol = 1e-15;
constexpr int newton_cap = 100;

// Legendre polynomial P_n and its derivative at x (on [-1,1]), by the
// three-term recurrence.  The derivative uses the standard identity
// P'_n = n (x P_n - P_{n-1}) / (x^2 - 1), valid away from the endpoints.
void legendre(int n, double x, double &p, double &dp)
{
   double p0 = 1.0, p1 = x;
   if (n == 0) { p = p0; dp = 0.0; return; }
   for (int k = 1; k < n; k++) {
      double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
   }
   p = p1;
   dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Newton iteration for a root of f starting at x, where f also supplies f'.
template <typename F>
double newton_root(F f, double x)
{
   for (int it = 0; it < newton_cap; it++) {
      double v, dv;
      f(x, v, dv);
      double dx = v / dv;
      x -= dx;
      if (std::abs(dx) < newton_tol) { return x; }
   }
   throw std::runtime_error("quadrature: Newton iteration did not converge");
}

// Map a symmetric rule on [-1,1] to [0,1].
QuadratureRule1D map_to_unit(const std::vector<double> &x,
                             const std::vector<double> &w)
{
   QuadratureRule1D rule;
   const int n = static_cast<int>(x.size());
   rule.points.resize(n);
   rule.weights.resize(n);
   for (int i = 0; i < n; i++) {
      rule.points[i] = 0.5 * (x[i] + 1.0);
      rule.weights[i] = 0.5 * w[i];
   }
   return rule;
}

} // namespace

QuadratureRule1D gauss_legendre(int n)
{
   if (n < 1) {
      throw std::invalid_argument("gauss_legendre: need n >= 1, got " +
                                  std::to_string(n));
   }
   std::vector<double> x(n), w(n);
   // Solve for the roots in the left half and mirror; the midpoint of an odd
   // rule is exactly zero.
   for (int i = 0; i < n / 2 + n % 2; i++) {
      double guess = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double xi = (2 * i + 1 == n)
                     ? 0.0
                     : newton_root([n](double t, double &v, double &dv)
                                   { legendre(n, t, v, dv); }, guess);
      double p, dp;
      legendre(n, xi, p, dp);
      double wi = (2 * i + 1 == n) ? 2.0 / (dp * dp)
                                   : 2.0 / ((1.0 - xi * xi) * dp * dp);
      x[i] = xi;
      w[i] = wi;
      x[n - 1 - i] = -xi;
      w[n - 1 - i] = wi;
   }
   return map_to_unit(x, w);
}

QuadratureRule1D gauss_lobatto(int n)
{
   if (n < 2) {
      throw std::invalid_argument("gauss_lobatto: need n >= 2, got " +
                                  std::to_string(n));
   }
   std::vector<double> x(n), w(n);
   const int m = n - 1;
   // Interior nodes are the roots of P'_{n-1}; endpoints are fixed.
   // P''_m comes from the Legendre differential equation.
   auto dlegendre = [m](double t, double &v, double &dv) {
      double p, dp;
      legendre(m, t, p, dp);
      v = dp;
      dv = (2.0 * t * dp - m * (m + 1) * p) / (1.0 - t * t);
   };
   x[0] = -1.0;
   x[n - 1] = 1.0;
   for (int i = 1; i <= (n - 1) / 2; i++) {
      double guess = -std::cos(M_PI * i / m);
      double xi = (2 * i == n - 1) ? 0.0 : newton_root(dlegendre, guess);
      x[i] = xi;
      x[n - 1 - i] = -xi;
   }
   for (int i = 0; i < n; i++) {
      double p, dp;
      legendre(m, x[i], p, dp);
      w[i] = 2.0 / (n * m * p * p);
   }
   for (int i = 0; i < n / 2; i++) { // enforce exact weight symmetry
      double wi = 0.5 * (w[i] + w[n - 1 - i]);
      w[i] = w[n - 1 - i] = wi;
   }
   return map_to_unit(x, w);
}

} // namespace tensorfem
