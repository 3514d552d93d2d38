// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_QUADRATURE_HPP
#define TENSORFEM_QUADRATURE_HPP

#include <vector>

namespace tensorfem {

/// 1D quadrature rule on the reference interval [0,1].
struct QuadratureRule1D {
   std::vector<double> points;
   std::vector<double> weights;

   int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule with n points, exact for polynomials of degree 2n-1.
/// Roots are found by Newton iteration on the Legendre polynomial; the rule
/// is symmetric about 0.5 by construction.
QuadratureRule1D gauss_legendre(int n);

/// Gauss-Lobatto rule with n >= 2 points, exact for degree 2n-3.
/// Includes both endpoints 0 and 1.
QuadratureRule1D gauss_lobatto(int n);

} // namespace tensorfem

#endif
