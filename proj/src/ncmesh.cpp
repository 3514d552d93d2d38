// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/ncmesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace tensorfem {

namespace {

std::uint64_t edge_hash_key(int a, int b)
{
   if (a > b) { std::swap(a, b); }
   return (static_cast<std::uint64_t>(a) << 32) |
          static_cast<std::uint32_t>(b);
}

std::array<int, 4> mat2_mult(const std::array<int, 4> &a,
                             const std::array<int, 4> &b)
{
   return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
           a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

} // namespace

NcForest::NcForest(Mesh root, int irregularity_limit)
   : root_(std::move(root)), limit_(irregularity_limit)
{
   if (limit_ < 0) {
      throw std::invalid_argument("NcForest: irregularity limit must be >= 0");
   }
   if (root_.geometry_order() != 1) {
      throw std::invalid_argument(
         "NcForest: refinement forests require a straight-sided root mesh");
   }
   vertices_ = root_.vertices();
   nodes_.reserve(root_.n_elements());
   for (int k = 0; k < root_.n_elements(); k++) {
      Node n;
      n.v = root_.element(k).v;
      n.attribute = root_.element(k).attribute;
      nodes_.push_back(n);
      roots_.push_back(k);
   }
   rebuild_leaves();
}

const std::array<int, 4> &NcForest::leaf_vertices(int leaf) const
{
   if (leaf < 0 || leaf >= n_leaves()) {
      throw std::invalid_argument("NcForest: leaf id out of range");
   }
   return nodes_[leaves_[leaf]].v;
}

int NcForest::leaf_attribute(int leaf) const
{
   if (leaf < 0 || leaf >= n_leaves()) {
      throw std::invalid_argument("NcForest: leaf id out of range");
   }
   return nodes_[leaves_[leaf]].attribute;
}

int NcForest::leaf_depth(int leaf) const
{
   if (leaf < 0 || leaf >= n_leaves()) {
      throw std::invalid_argument("NcForest: leaf id out of range");
   }
   return nodes_[leaves_[leaf]].depth;
}

int NcForest::find_vertex(int a, int b) const
{
   const auto it = mid_.find(edge_hash_key(a, b));
   return it == mid_.end() ? -1 : it->second;
}

int NcForest::get_mid(int a, int b)
{
   const std::uint64_t key = edge_hash_key(a, b);
   const auto it = mid_.find(key);
   if (it != mid_.end()) { return it->second; }
   const int id = n_vertices();
   vertices_.push_back({0.5 * (vertices_[a].x + vertices_[b].x),
                        0.5 * (vertices_[a].y + vertices_[b].y)});
   mid_.emplace(key, id);
   return id;
}

void NcForest::register_mid(int a, int b, int mid)
{
   mid_.emplace(edge_hash_key(a, b), mid);
}

void NcForest::split_node(int node, SplitKind kind)
{
   const std::array<int, 4> v = nodes_[node].v;
   const int attr = nodes_[node].attribute;
   const int depth = nodes_[node].depth + 1;
   std::array<std::array<int, 4>, 4> cv;
   int n_children = 0;
   switch (kind) {
      case SplitKind::Iso: {
         const int mb = get_mid(v[0], v[1]);
         const int mr = get_mid(v[1], v[2]);
         const int mt = get_mid(v[2], v[3]);
         const int ml = get_mid(v[3], v[0]);
         // The center doubles as the midpoint of both cross segments, so a
         // later anisotropic split of a child finds it instead of minting a
         // duplicate.
         const int c = get_mid(mb, mt);
         register_mid(ml, mr, c);
         cv[0] = {v[0], mb, c, ml};
         cv[1] = {mb, v[1], mr, c};
         cv[2] = {c, mr, v[2], mt};
         cv[3] = {ml, c, mt, v[3]};
         n_children = 4;
         break;
      }
      case SplitKind::X: {
         const int mb = get_mid(v[0], v[1]);
         const int mt = get_mid(v[2], v[3]);
         cv[0] = {v[0], mb, mt, v[3]};
         cv[1] = {mb, v[1], v[2], mt};
         n_children = 2;
         break;
      }
      case SplitKind::Y: {
         const int ml = get_mid(v[3], v[0]);
         const int mr = get_mid(v[1], v[2]);
         cv[0] = {v[0], v[1], mr, ml};
         cv[1] = {ml, mr, v[2], v[3]};
         n_children = 2;
         break;
      }
      default: throw std::invalid_argument("NcForest: unknown split kind");
   }
   nodes_[node].split = kind;
   for (int i = 0; i < n_children; i++) {
      Node child;
      child.v = cv[i];
      child.attribute = attr;
      child.depth = depth;
      nodes_[node].child[i] = static_cast<int>(nodes_.size());
      nodes_.push_back(child);
   }
}

void NcForest::rebuild_leaves()
{
   leaves_.clear();
   std::vector<int> stack;
   for (auto root = roots_.rbegin(); root != roots_.rend(); ++root) {
      stack.push_back(*root);
   }
   while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      const Node &n = nodes_[node];
      if (n.split == SplitKind::None) {
         leaves_.push_back(node);
         continue;
      }
      const int nc = n.split == SplitKind::Iso ? 4 : 2;
      for (int i = nc - 1; i >= 0; i--) { stack.push_back(n.child[i]); }
   }
}

int NcForest::edge_depth(int a, int b) const
{
   const int m = find_vertex(a, b);
   if (m < 0) { return 0; }
   return 1 + std::max(edge_depth(a, m), edge_depth(m, b));
}

void NcForest::enforce_limit()
{
   bool changed = true;
   while (changed) {
      changed = false;
      // leaves_ stays valid while nodes split; split leaves are skipped and
      // their children picked up by the rebuild before the next pass.
      for (const int node : leaves_) {
         if (nodes_[node].split != SplitKind::None) { continue; }
         const std::array<int, 4> v = nodes_[node].v;
         for (int e = 0; e < 4; e++) {
            if (edge_depth(v[e], v[(e + 1) % 4]) > limit_) {
               split_node(node, SplitKind::Iso);
               changed = true;
               break;
            }
         }
      }
      if (changed) { rebuild_leaves(); }
   }
}

void NcForest::refine(const std::vector<std::pair<int, SplitKind>> &marks)
{
   std::vector<bool> marked(leaves_.size(), false);
   for (const auto &[leaf, kind] : marks) {
      if (leaf < 0 || leaf >= n_leaves()) {
         throw std::invalid_argument("NcForest::refine: invalid leaf id");
      }
      if (kind != SplitKind::Iso && kind != SplitKind::X &&
          kind != SplitKind::Y) {
         throw std::invalid_argument("NcForest::refine: unknown split kind");
      }
      if (marked[leaf]) {
         throw std::invalid_argument("NcForest::refine: duplicate mark");
      }
      marked[leaf] = true;
   }
   for (const auto &[leaf, kind] : marks) {
      split_node(leaves_[leaf], kind);
   }
   rebuild_leaves();
   if (limit_ > 0) { enforce_limit(); }
}

std::array<EdgeSplit, 4> NcForest::edge_split_type(int v1, int v2, int v3,
                                                   int v4) const
{
   const std::array<int, 4> v{v1, v2, v3, v4};
   bool found = false;
   for (const int node : leaves_) {
      if (nodes_[node].v == v) {
         found = true;
         break;
      }
   }
   if (!found) {
      throw std::invalid_argument(
         "NcForest::edge_split_type: ids are not a current leaf");
   }
   std::array<EdgeSplit, 4> result;
   for (int e = 0; e < 4; e++) {
      const int mid = find_vertex(v[e], v[(e + 1) % 4]);
      result[e] = {mid >= 0, mid};
   }
   return result;
}

void NcForest::collect_slaves(const EdgeKey &master, int p, int q, double a,
                              double b,
                              std::map<EdgeKey, EdgeRelation> &rel) const
{
   const int m = find_vertex(p, q);
   if (m < 0) {
      // Finest sub-segment: a leaf edge of the refined side.
      EdgeRelation &r = rel.at({std::min(p, q), std::max(p, q)});
      r.kind = EdgeRelation::Kind::Slave;
      r.master = master;
      r.a = a;
      r.b = b;
      r.aligned = p < q;
      return;
   }
   const double half = 0.5 * (a + b);
   collect_slaves(master, p, m, a, half, rel);
   collect_slaves(master, m, q, half, b, rel);
}

std::map<NcForest::EdgeKey, EdgeRelation> NcForest::edge_relations() const
{
   std::map<EdgeKey, EdgeRelation> rel;
   for (const int node : leaves_) {
      const std::array<int, 4> &v = nodes_[node].v;
      for (int e = 0; e < 4; e++) {
         const int lo = std::min(v[e], v[(e + 1) % 4]);
         const int hi = std::max(v[e], v[(e + 1) % 4]);
         rel.insert({{lo, hi}, EdgeRelation{}});
      }
   }
   for (auto &[key, relation] : rel) {
      if (find_vertex(key[0], key[1]) >= 0) {
         relation.kind = EdgeRelation::Kind::Master;
      }
   }
   for (const auto &[key, relation] : rel) {
      if (relation.kind == EdgeRelation::Kind::Master) {
         collect_slaves(key, key[0], key[1], 0.0, 1.0, rel);
      }
   }
   return rel;
}

void NcForest::hilbert_visit(int node, const std::array<int, 4> &d,
                             std::vector<int> &out) const
{
   const Node &n = nodes_[node];
   if (n.split == SplitKind::None) {
      out.push_back(node);
      return;
   }
   if (n.split == SplitKind::Iso) {
      // Logical visit order SW, NW, NE, SE with the orientation d applied;
      // child states compose d with a reflection for the first and last
      // child (the classic construction).
      static const int logical[4][2] = {{-1, -1}, {-1, 1}, {1, 1}, {1, -1}};
      static const std::array<std::array<int, 4>, 4> next{{
         {0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 0, 1}, {0, -1, -1, 0}}};
      for (int i = 0; i < 4; i++) {
         const int sx = d[0] * logical[i][0] + d[1] * logical[i][1];
         const int sy = d[2] * logical[i][0] + d[3] * logical[i][1];
         const int child = sx < 0 ? (sy < 0 ? 0 : 3) : (sy < 0 ? 1 : 2);
         hilbert_visit(n.child[child], mat2_mult(d, next[i]), out);
      }
      return;
   }
   // Anisotropic pair: visit first the child containing the quadrant the
   // isotropic rule would enter first; the orientation is left unchanged.
   const int sx = -d[0] - d[1];
   const int sy = -d[2] - d[3];
   const int first = n.split == SplitKind::X ? (sx < 0 ? 0 : 1)
                                             : (sy < 0 ? 0 : 1);
   hilbert_visit(n.child[first], d, out);
   hilbert_visit(n.child[1 - first], d, out);
}

std::vector<int> NcForest::leaf_order(CurveKind curve) const
{
   std::vector<int> order(leaves_.size());
   if (curve == CurveKind::Morton) {
      for (size_t i = 0; i < order.size(); i++) {
         order[i] = static_cast<int>(i);
      }
      return order;
   }
   std::vector<int> sequence;
   sequence.reserve(leaves_.size());
   for (const int root : roots_) {
      hilbert_visit(root, {1, 0, 0, 1}, sequence);
   }
   std::vector<int> canonical_index(nodes_.size(), -1);
   for (size_t i = 0; i < leaves_.size(); i++) {
      canonical_index[leaves_[i]] = static_cast<int>(i);
   }
   for (size_t i = 0; i < sequence.size(); i++) {
      order[i] = canonical_index[sequence[i]];
   }
   return order;
}

void NcForest::split_boundary(int attr, int p, int q,
                              std::vector<BoundarySegment> &out) const
{
   const int m = find_vertex(p, q);
   if (m < 0) {
      out.push_back({attr, {p, q}});
      return;
   }
   split_boundary(attr, p, m, out);
   split_boundary(attr, m, q, out);
}

Mesh NcForest::leaf_mesh() const
{
   std::vector<MeshElement> elements;
   elements.reserve(leaves_.size());
   for (const int node : leaves_) {
      elements.push_back({nodes_[node].attribute, nodes_[node].v});
   }
   std::vector<BoundarySegment> boundary;
   for (int i = 0; i < root_.n_boundary(); i++) {
      const BoundarySegment &s = root_.boundary(i);
      split_boundary(s.attribute, s.v[0], s.v[1], boundary);
   }
   return Mesh(vertices_, std::move(elements), std::move(boundary));
}

} // namespace tensorfem
