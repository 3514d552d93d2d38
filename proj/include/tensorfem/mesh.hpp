// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_MESH_HPP
#define TENSORFEM_MESH_HPP

#include "tensorfem/basis.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace tensorfem {

struct Vec2 {
   double x = 0.0;
   double y = 0.0;
};

/// Quadrilateral element: corner vertex ids in counterclockwise order,
/// matching the reference square corners (0,0), (1,0), (1,1), (0,1).
struct MeshElement {
   int attribute = 1;
   std::array<int, 4> v{};
};

/// Boundary edge with an attribute for boundary-condition selection.
struct BoundarySegment {
   int attribute = 1;
   std::array<int, 2> v{};
};

/// Unique-edge table for a quad mesh.
///
/// Edges are discovered element by element (local order: bottom, right, top,
/// left) and keyed by the sorted vertex pair, so edge ids are deterministic.
/// Each edge is directed from its lower-numbered vertex to the higher one;
/// that direction fixes the layout of edge DOFs.
class MeshTopology {
public:
   MeshTopology() = default;
   MeshTopology(int n_vertices, const std::vector<MeshElement> &elements);

   int n_edges() const { return static_cast<int>(edges_.size()); }
   /// (lo, hi) vertex pair of edge e.
   std::array<int, 2> edge(int e) const { return edges_[e]; }
   /// Edge id for an unordered vertex pair, or -1.
   int edge_id(int a, int b) const;
   /// Edge ids of element k, local order: bottom, right, top, left.
   const std::array<int, 4> &element_edges(int k) const
   {
      return elem_edges_[k];
   }
   /// Whether the counterclockwise traversal of local edge le of element k
   /// runs from the edge's lower-numbered vertex to the higher one.
   const std::array<bool, 4> &element_edge_forward(int k) const
   {
      return elem_fwd_[k];
   }
   /// Elements adjacent to edge e (one or two).
   const std::vector<int> &edge_elements(int e) const
   {
      return edge_elems_[e];
   }

private:
   std::vector<std::array<int, 2>> edges_;
   std::vector<std::array<int, 4>> elem_edges_;
   std::vector<std::array<bool, 4>> elem_fwd_;
   std::vector<std::vector<int>> edge_elems_;
   std::map<std::array<int, 2>, int> edge_ids_;
};

/// Scalar tensor-product DOF enumeration.
///
/// Continuous layout: all vertex DOFs in vertex-id order, then edge DOFs in
/// edge-id order (each edge traversed from its lower-numbered vertex to the
/// higher one), then element-interior DOFs in element-id order.  Per element
/// the (order+1)^2 DOFs are listed lexicographically, x fastest.  Edge DOF
/// reversal relies on the node family being symmetric about 0.5.
struct DofLayout {
   int order = 1;
   int n_dofs = 0;
   std::vector<int> elem_dofs;

   std::span<const int> dofs(int k) const
   {
      const size_t nd = static_cast<size_t>(order + 1) * (order + 1);
      return {elem_dofs.data() + nd * k, nd};
   }
};

DofLayout build_h1_layout(int n_vertices, const MeshTopology &topo,
                          const std::vector<MeshElement> &elements, int order);
DofLayout build_l2_layout(int n_elements, int order);

/// High-order nodal geometry: one coordinate per geometry DOF, shared lattice
/// nodes stored once through the continuous enumeration above.
struct NodalField {
   int order = 1;
   NodeKind kind = NodeKind::GaussLobatto;
   std::vector<Vec2> coords;
   DofLayout layout;
};

/// Reference-to-physical map of a single element,
/// x(xh) = sum_i c_i w_i(xh) over the tensor-product geometry basis.
class ElementTransformation {
public:
   struct Jacobian {
      double dxdx, dxdy; // d x / d xh, d x / d yh
      double dydx, dydy;
      double det() const { return dxdx * dydy - dxdy * dydx; }
   };

   ElementTransformation(std::shared_ptr<const Basis1D> basis,
                         std::vector<Vec2> control_points);

   Vec2 point(double xh, double yh) const;
   Jacobian jacobian(double xh, double yh) const;

private:
   std::shared_ptr<const Basis1D> basis_;
   std::vector<Vec2> ctrl_;
};

/// Conforming quadrilateral mesh, straight-sided unless a NodalField is
/// attached.  Immutable after construction.
class Mesh {
public:
   Mesh(std::vector<Vec2> vertices, std::vector<MeshElement> elements,
        std::vector<BoundarySegment> boundary);

   int n_vertices() const { return static_cast<int>(vertices_.size()); }
   int n_elements() const { return static_cast<int>(elements_.size()); }
   int n_boundary() const { return static_cast<int>(boundary_.size()); }

   const Vec2 &vertex(int i) const { return vertices_[i]; }
   const MeshElement &element(int k) const { return elements_[k]; }
   const BoundarySegment &boundary(int i) const { return boundary_[i]; }
   const std::vector<Vec2> &vertices() const { return vertices_; }
   const std::vector<MeshElement> &elements() const { return elements_; }
   const std::vector<BoundarySegment> &boundary_segments() const
   {
      return boundary_;
   }

   const MeshTopology &topology() const { return topology_; }
   const NodalField *nodes() const
   {
      return nodes_ ? &*nodes_ : nullptr;
   }
   /// Geometry order: 1 for straight meshes.
   int geometry_order() const { return nodes_ ? nodes_->order : 1; }

   /// Map of element k.  Verifies det J > 0 at the points of the default
   /// quadrature rule (geometry order + 2 per axis).
   ElementTransformation transformation(int k) const;

   /// Largest corner-to-corner distance of element k.
   double element_diameter(int k) const;

   bool has_boundary_attribute(int attr) const;

private:
   friend Mesh curve_mesh(const Mesh &, int,
                          const std::function<Vec2(Vec2)> &, NodeKind);
   friend class MeshIo;

   std::vector<Vec2> vertices_;
   std::vector<MeshElement> elements_;
   std::vector<BoundarySegment> boundary_;
   MeshTopology topology_;
   std::optional<NodalField> nodes_;
   std::shared_ptr<const Basis1D> geom_basis_;

   void set_nodes(NodalField nodes);
   std::vector<Vec2> element_control_points(int k) const;
};

/// nx-by-ny Cartesian mesh of [0,width] x [0,height].  Boundary attributes:
/// 1 bottom, 2 right, 3 top, 4 left.
Mesh make_cartesian(int nx, int ny, double width = 1.0, double height = 1.0);

/// Replaces the geometry by the image of the current geometry under map,
/// represented in an order-m nodal basis.  Throws the inverted-element error
/// if det J <= 0 anywhere on the default quadrature lattice.
Mesh curve_mesh(const Mesh &mesh, int order,
                const std::function<Vec2(Vec2)> &map,
                NodeKind kind = NodeKind::GaussLobatto);

/// Reference coordinates of the point at parameter s in [0,1] along local
/// edge le (counterclockwise traversal).
Vec2 edge_ref_point(int le, double s);

} // namespace tensorfem

#endif
