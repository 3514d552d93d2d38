// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tensorfem {

Basis1D::Basis1D(int order, NodeKind kind) : order_(order), kind_(kind)
{
   if (order < 0) {
      throw std::invalid_argument("Basis1D: order must be >= 0, got " +
                                  std::to_string(order));
   }
   const int n = order + 1;
   switch (kind) {
      case NodeKind::GaussLobatto:
         if (order < 1) {
            throw std::invalid_argument(
               "Basis1D: Gauss-Lobatto nodes need order >= 1");
         }
         nodes_ = gauss_lobatto(n).points;
         break;
      case NodeKind::GaussLegendre:
         nodes_ = gauss_legendre(n).points;
         break;
      case NodeKind::Uniform:
         nodes_.resize(n);
         if (order == 0) {
            nodes_[0] = 0.5;
         }
         else {
            for (int i = 0; i < n; i++) { nodes_[i] = double(i) / order; }
         }
         break;
   }
   bary_.assign(n, 1.0);
   for (int j = 0; j < n; j++) {
      for (int k = 0; k < n; k++) {
         if (k != j) { bary_[j] /= nodes_[j] - nodes_[k]; }
      }
   }
}

void Basis1D::eval(double x, double *values) const
{
   const int n = order_ + 1;
   // Exact node hits short-circuit to the Kronecker delta; the barycentric
   // formula is stable arbitrarily close to (but not at) a node.
   for (int j = 0; j < n; j++) {
      if (x == nodes_[j]) {
         for (int k = 0; k < n; k++) { values[k] = (k == j) ? 1.0 : 0.0; }
         return;
      }
   }
   double denom = 0.0;
   for (int j = 0; j < n; j++) {
      values[j] = bary_[j] / (x - nodes_[j]);
      denom += values[j];
   }
   for (int j = 0; j < n; j++) { values[j] /= denom; }
}

void Basis1D::eval(double x, double *values, double *derivs) const
{
   const int n = order_ + 1;
   for (int i = 0; i < n; i++) {
      if (x == nodes_[i]) {
         // Differentiation-matrix row at node i; the diagonal entry makes
         // the row sum exactly zero.
         double dii = 0.0;
         for (int j = 0; j < n; j++) {
            values[j] = (j == i) ? 1.0 : 0.0;
            if (j != i) {
               derivs[j] = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
               dii -= derivs[j];
            }
         }
         derivs[i] = dii;
         return;
      }
   }
   eval(x, values);
   // l'_j(x) = l_j(x) * sum_{k != j} 1/(x - x_k), valid off the nodes.
   double all = 0.0;
   for (int k = 0; k < n; k++) { all += 1.0 / (x - nodes_[k]); }
   for (int j = 0; j < n; j++) {
      derivs[j] = values[j] * (all - 1.0 / (x - nodes_[j]));
   }
}

EvalMatrices eval_matrices(const Basis1D &basis, const QuadratureRule1D &rule)
{
   const int nq = rule.size();
   const int n = basis.order() + 1;
   EvalMatrices m{DenseMatrix(nq, n), DenseMatrix(nq, n)};
   std::vector<double> val(n), der(n);
   for (int k = 0; k < nq; k++) {
      basis.eval(rule.points[k], val.data(), der.data());
      for (int i = 0; i < n; i++) {
         m.B1d(k, i) = val[i];
         m.G1d(k, i) = der[i];
      }
   }
   return m;
}

} // namespace tensorfem
