// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_BASIS_HPP
#define TENSORFEM_BASIS_HPP

#include "tensorfem/dense.hpp"
#include "tensorfem/quadrature.hpp"

#include <vector>

namespace tensorfem {

/// Node families for nodal (Lagrange) bases on [0,1].
enum class NodeKind { GaussLobatto, GaussLegendre, Uniform };

/// 1D Lagrange basis of order p on p+1 nodes in [0,1], evaluated with the
/// barycentric formula.  All node families here are symmetric about 0.5;
/// the tensor-product DOF enumeration relies on that symmetry.
class Basis1D {
public:
   Basis1D(int order, NodeKind kind);

   int order() const { return order_; }
   NodeKind node_kind() const { return kind_; }
   const std::vector<double> &nodes() const { return nodes_; }

   /// values[j] = l_j(x), j = 0..p.
   void eval(double x, double *values) const;
   /// values[j] = l_j(x), derivs[j] = l'_j(x).
   void eval(double x, double *values, double *derivs) const;

private:
   int order_;
   NodeKind kind_;
   std::vector<double> nodes_;
   std::vector<double> bary_; // barycentric weights
};

/// 1D basis and derivative values tabulated at the points of a quadrature
/// rule: B1d(k,i) = l_i(q_k), G1d(k,i) = l'_i(q_k).
struct EvalMatrices {
   DenseMatrix B1d;
   DenseMatrix G1d;
};

EvalMatrices eval_matrices(const Basis1D &basis, const QuadratureRule1D &rule);

} // namespace tensorfem

#endif
