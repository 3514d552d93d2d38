// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_NCMESH_HPP
#define TENSORFEM_NCMESH_HPP

#include "tensorfem/mesh.hpp"

#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tensorfem {

/// Ways to split a quad leaf.  X cuts by a vertical line (children left and
/// right), Y by a horizontal one (children bottom and top).
enum class SplitKind { None, Iso, X, Y };

enum class CurveKind { Morton, Hilbert };

/// Classification of one edge of a leaf: whether the refinement forest knows
/// a mid-edge vertex for it.
struct EdgeSplit {
   bool split = false;
   int mid = -1;
};

/// Classification of a leaf edge against the neighbor across it.  A slave
/// edge occupies the sub-interval [a, b] of its master's parameterization
/// (masters are parameterized from their lower-numbered vertex to the
/// higher); aligned says whether the slave's own lower-to-higher direction
/// runs with increasing master parameter.
struct EdgeRelation {
   enum class Kind { Conforming, Master, Slave };

   Kind kind = Kind::Conforming;
   std::array<int, 2> master{-1, -1};
   double a = 0.0;
   double b = 1.0;
   bool aligned = true;
};

/// Quadtree refinement forest over a straight-sided root mesh.
///
/// Leaves partition each root element.  Mid-edge vertices are created once
/// per geometric edge through a hash map keyed on the endpoint pair, which
/// keeps interfaces between arbitrarily refined neighbors watertight.  The
/// canonical leaf order is the depth-first traversal with the fixed child
/// order SW, SE, NE, NW (left/right, bottom/top for anisotropic splits).
class NcForest {
public:
   /// Sorted vertex id pair naming a geometric edge.
   using EdgeKey = std::array<int, 2>;

   /// irregularity_limit bounds the depth of hanging-vertex chains on any
   /// leaf edge; 0 means unlimited.
   explicit NcForest(Mesh root, int irregularity_limit = 0);

   const Mesh &root_mesh() const { return root_; }
   int irregularity_limit() const { return limit_; }

   int n_leaves() const { return static_cast<int>(leaves_.size()); }
   const std::array<int, 4> &leaf_vertices(int leaf) const;
   int leaf_attribute(int leaf) const;
   int leaf_depth(int leaf) const;

   int n_vertices() const { return static_cast<int>(vertices_.size()); }
   const Vec2 &vertex(int v) const { return vertices_[v]; }
   /// Registered mid-edge vertex of (a, b), or -1.  Symmetric in a, b.
   int find_vertex(int a, int b) const;

   /// Splits the marked leaves, then restores the irregularity limit with
   /// forced isotropic refinements if one is configured.  Leaf ids refer to
   /// the canonical order before the call.
   void refine(const std::vector<std::pair<int, SplitKind>> &marks);

   /// Per-edge split classification of the leaf with the given corner ids
   /// (in stored counterclockwise order), local edge order bottom, right,
   /// top, left.
   std::array<EdgeSplit, 4> edge_split_type(int v1, int v2, int v3,
                                            int v4) const;

   /// Classification of every leaf edge.  Slave relations always name the
   /// ultimate master (the leaf edge that fully contains them) with the
   /// composed sub-interval.
   std::map<EdgeKey, EdgeRelation> edge_relations() const;

   /// Permutation of the canonical leaf order along a space-filling curve.
   /// Morton is the canonical order itself; Hilbert reorders children per
   /// level following the classic 2D construction.
   std::vector<int> leaf_order(CurveKind curve) const;

   /// Conforming mesh of the current leaves.  Hanging vertices become
   /// ordinary vertices; vertex ids coincide with forest vertex ids, element
   /// ids with canonical leaf ids.  Boundary segments are inherited from the
   /// root mesh and split along with their edges.
   Mesh leaf_mesh() const;

private:
   struct Node {
      std::array<int, 4> v{};
      int attribute = 1;
      int depth = 0;
      SplitKind split = SplitKind::None;
      std::array<int, 4> child{-1, -1, -1, -1};
   };

   Mesh root_;
   int limit_ = 0;
   std::vector<Node> nodes_;
   std::vector<int> roots_;
   std::vector<Vec2> vertices_;
   std::unordered_map<std::uint64_t, int> mid_;
   std::vector<int> leaves_; // node ids, canonical order

   int get_mid(int a, int b);
   void register_mid(int a, int b, int mid);
   void split_node(int node, SplitKind kind);
   void rebuild_leaves();
   void enforce_limit();
   int edge_depth(int a, int b) const;
   void collect_slaves(const EdgeKey &master, int p, int q, double a, double b,
                       std::map<EdgeKey, EdgeRelation> &rel) const;
   void hilbert_visit(int node, const std::array<int, 4> &d,
                      std::vector<int> &out) const;
   void split_boundary(int attr, int p, int q,
                       std::vector<BoundarySegment> &out) const;
};

} // namespace tensorfem

#endif
