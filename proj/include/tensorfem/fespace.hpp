// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_FESPACE_HPP
#define TENSORFEM_FESPACE_HPP

#include "tensorfem/ncmesh.hpp"
#include "tensorfem/sparse.hpp"

#include <functional>
#include <vector>

namespace tensorfem {

enum class FeFamily { H1, L2 };

/// How stored DOF values map to function values: Value is plain nodal
/// interpolation, Integral divides by the transformation weight det J
/// (available for L2 only).
enum class MapType { Value, Integral };

/// Element family descriptor: continuous H1 on Gauss-Lobatto nodes (order
/// >= 1) or discontinuous L2 on Gauss-Legendre nodes (order >= 0).
class FeCollection {
public:
   FeCollection(FeFamily family, int order, MapType map_type = MapType::Value);

   FeFamily family() const { return family_; }
   int order() const { return order_; }
   MapType map_type() const { return map_type_; }
   NodeKind node_kind() const
   {
      return family_ == FeFamily::H1 ? NodeKind::GaussLobatto
                                     : NodeKind::GaussLegendre;
   }

private:
   FeFamily family_;
   int order_;
   MapType map_type_;
};

/// Scalar finite element space on a conforming mesh or a refinement forest.
///
/// The space always works on a conforming mesh (for forests, the cut mesh of
/// the leaves); non-conformity enters only through the prolongation P that
/// maps the n_true_dofs unconstrained values to all n_dofs local values.
/// Hanging (slave) DOFs carry interpolation rows, everything else a unit
/// row, so P = [I; W] up to a row permutation and P is the identity on
/// conforming meshes.
class FeSpace {
public:
   FeSpace(const Mesh &mesh, const FeCollection &coll);
   FeSpace(const NcForest &forest, const FeCollection &coll);

   const Mesh &mesh() const { return mesh_; }
   const FeCollection &collection() const { return coll_; }
   const Basis1D &basis() const { return *basis_; }

   int n_dofs() const { return layout_.n_dofs; }
   int n_true_dofs() const { return static_cast<int>(true_dofs_.size()); }
   bool conforming() const { return conforming_; }

   std::span<const int> element_dofs(int k) const { return layout_.dofs(k); }
   const SparseMatrix &prolongation() const { return P_; }

   /// Index of a DOF among the true DOFs, -1 for constrained ones.
   int true_index(int dof) const { return true_index_[dof]; }
   int true_dof(int t) const { return true_dofs_[t]; }

   /// Sorted true DOFs supported on boundary segments with the given
   /// attributes.  Throws if an attribute does not occur in the mesh.
   std::vector<int> essential_true_dofs(const std::vector<int> &attrs) const;

   /// x = P X.
   Vector true_to_local(const Vector &X) const;
   /// X = R x, the entries of x at the true DOFs (so R P = I).
   Vector local_to_true(const Vector &x) const;

private:
   Mesh mesh_;
   FeCollection coll_;
   std::shared_ptr<const Basis1D> basis_;
   DofLayout layout_;
   bool conforming_ = true;
   SparseMatrix P_;
   std::vector<int> true_index_;
   std::vector<int> true_dofs_;

   void build_layout();
   void build_conforming();
   void build_constrained(const NcForest &forest);
};

/// Scalar field stored as one value per space DOF.
class GridFunction {
public:
   explicit GridFunction(const FeSpace &space);

   const FeSpace &space() const { return *space_; }
   Vector &values() { return values_; }
   const Vector &values() const { return values_; }

   /// Loads the conforming field P X from a true-DOF vector.
   void set_from_true(const Vector &X);

   double eval(int element, double xh, double yh) const;
   /// Physical gradient; the caller provides the element transformation.
   Vec2 eval_grad(int element, const ElementTransformation &tr, double xh,
                  double yh) const;
   Vec2 eval_grad(int element, double xh, double yh) const;

private:
   const FeSpace *space_;
   Vector values_;
};

/// Nodal interpolation of f (values scaled by det J for INTEGRAL spaces).
GridFunction project_coefficient(const FeSpace &space,
                                 const std::function<double(Vec2)> &f);

/// sqrt of the integral of (g - u_exact)^2, with order + 3 Gauss points per
/// axis.
double compute_l2_error(const GridFunction &g,
                        const std::function<double(Vec2)> &u_exact);

} // namespace tensorfem

#endif
