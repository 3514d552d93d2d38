// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tensorfem {

namespace {

// Local edge endpoints in counterclockwise traversal order.
constexpr int edge_from[4] = {0, 1, 2, 3};
constexpr int edge_to[4] = {1, 2, 3, 0};

std::shared_ptr<const Basis1D> make_geom_basis(int order, NodeKind kind)
{
   return std::make_shared<const Basis1D>(order, kind);
}

} // namespace

MeshTopology::MeshTopology(int n_vertices,
                           const std::vector<MeshElement> &elements)
{
   elem_edges_.resize(elements.size());
   elem_fwd_.resize(elements.size());
   for (size_t k = 0; k < elements.size(); k++) {
      const auto &v = elements[k].v;
      for (int le = 0; le < 4; le++) {
         const int a = v[edge_from[le]];
         const int b = v[edge_to[le]];
         if (a < 0 || a >= n_vertices || b < 0 || b >= n_vertices) {
            throw std::invalid_argument("MeshTopology: vertex index out of "
                                        "range in element " +
                                        std::to_string(k));
         }
         if (a == b) {
            throw std::invalid_argument("MeshTopology: degenerate edge in "
                                        "element " + std::to_string(k));
         }
         const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
         auto [it, inserted] = edge_ids_.try_emplace(
            key, static_cast<int>(edges_.size()));
         if (inserted) {
            edges_.push_back(key);
            edge_elems_.emplace_back();
         }
         elem_edges_[k][le] = it->second;
         elem_fwd_[k][le] = (a < b);
         edge_elems_[it->second].push_back(static_cast<int>(k));
      }
   }
}

int MeshTopology::edge_id(int a, int b) const
{
   auto it = edge_ids_.find({std::min(a, b), std::max(a, b)});
   return it == edge_ids_.end() ? -1 : it->second;
}

DofLayout build_h1_layout(int n_vertices, const MeshTopology &topo,
                          const std::vector<MeshElement> &elements, int order)
{
   if (order < 1) {
      throw std::invalid_argument("build_h1_layout: order must be >= 1");
   }
   const int p = order;
   const int per_edge = p - 1;
   const int per_interior = (p - 1) * (p - 1);
   const int edge_base = n_vertices;
   const int interior_base = edge_base + topo.n_edges() * per_edge;

   DofLayout layout;
   layout.order = p;
   layout.n_dofs = interior_base +
                   static_cast<int>(elements.size()) * per_interior;
   layout.elem_dofs.resize(elements.size() * (p + 1) * (p + 1));

   for (size_t k = 0; k < elements.size(); k++) {
      const auto &v = elements[k].v;
      const auto &edges = topo.element_edges(static_cast<int>(k));
      int *dofs = layout.elem_dofs.data() + k * (p + 1) * (p + 1);
      auto at = [&](int a, int b) -> int & { return dofs[a + b * (p + 1)]; };

      at(0, 0) = v[0];
      at(p, 0) = v[1];
      at(p, p) = v[2];
      at(0, p) = v[3];

      // Interior edge DOF n of a lattice traversal from vertex f to vertex t
      // maps to slot n-1 when the traversal runs lower id -> higher id, and
      // to the mirrored slot otherwise (symmetric nodes).
      auto edge_dof = [&](int le, int f, int t, int n) {
         const int slot = (f < t) ? n - 1 : per_edge - n;
         return edge_base + edges[le] * per_edge + slot;
      };
      for (int n = 1; n < p; n++) {
         at(n, 0) = edge_dof(0, v[0], v[1], n); // bottom, param x
         at(p, n) = edge_dof(1, v[1], v[2], n); // right, param y
         at(n, p) = edge_dof(2, v[3], v[2], n); // top, param x
         at(0, n) = edge_dof(3, v[0], v[3], n); // left, param y
      }
      for (int b = 1; b < p; b++) {
         for (int a = 1; a < p; a++) {
            at(a, b) = interior_base + static_cast<int>(k) * per_interior +
                       (a - 1) + (b - 1) * (p - 1);
         }
      }
   }
   return layout;
}

DofLayout build_l2_layout(int n_elements, int order)
{
   if (order < 0) {
      throw std::invalid_argument("build_l2_layout: order must be >= 0");
   }
   const int nd = (order + 1) * (order + 1);
   DofLayout layout;
   layout.order = order;
   layout.n_dofs = n_elements * nd;
   layout.elem_dofs.resize(static_cast<size_t>(n_elements) * nd);
   for (int i = 0; i < layout.n_dofs; i++) { layout.elem_dofs[i] = i; }
   return layout;
}

ElementTransformation::ElementTransformation(
   std::shared_ptr<const Basis1D> basis, std::vector<Vec2> control_points)
   : basis_(std::move(basis)), ctrl_(std::move(control_points))
{
   const int n = basis_->order() + 1;
   if (static_cast<int>(ctrl_.size()) != n * n) {
      throw std::invalid_argument("ElementTransformation: control point "
                                  "count does not match the basis");
   }
}

Vec2 ElementTransformation::point(double xh, double yh) const
{
   const int n = basis_->order() + 1;
   std::vector<double> lx(n), ly(n);
   basis_->eval(xh, lx.data());
   basis_->eval(yh, ly.data());
   Vec2 p;
   for (int b = 0; b < n; b++) {
      for (int a = 0; a < n; a++) {
         const double w = lx[a] * ly[b];
         p.x += w * ctrl_[a + b * n].x;
         p.y += w * ctrl_[a + b * n].y;
      }
   }
   return p;
}

ElementTransformation::Jacobian
ElementTransformation::jacobian(double xh, double yh) const
{
   const int n = basis_->order() + 1;
   std::vector<double> lx(n), ly(n), dx(n), dy(n);
   basis_->eval(xh, lx.data(), dx.data());
   basis_->eval(yh, ly.data(), dy.data());
   Jacobian j{0.0, 0.0, 0.0, 0.0};
   for (int b = 0; b < n; b++) {
      for (int a = 0; a < n; a++) {
         const Vec2 &c = ctrl_[a + b * n];
         const double wx = dx[a] * ly[b];
         const double wy = lx[a] * dy[b];
         j.dxdx += wx * c.x;
         j.dydx += wx * c.y;
         j.dxdy += wy * c.x;
         j.dydy += wy * c.y;
      }
   }
   return j;
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<MeshElement> elements,
           std::vector<BoundarySegment> boundary)
   : vertices_(std::move(vertices)), elements_(std::move(elements)),
     boundary_(std::move(boundary))
{
   const int nv = n_vertices();
   for (size_t k = 0; k < elements_.size(); k++) {
      const auto &v = elements_[k].v;
      for (int i = 0; i < 4; i++) {
         if (v[i] < 0 || v[i] >= nv) {
            throw std::invalid_argument("Mesh: vertex index out of range in "
                                        "element " + std::to_string(k));
         }
         for (int j = i + 1; j < 4; j++) {
            if (v[i] == v[j]) {
               throw std::invalid_argument("Mesh: duplicated vertex id in "
                                           "element " + std::to_string(k));
            }
         }
      }
   }
   topology_ = MeshTopology(nv, elements_);
   for (size_t i = 0; i < boundary_.size(); i++) {
      const auto &s = boundary_[i];
      const int e = (s.v[0] >= 0 && s.v[0] < nv && s.v[1] >= 0 && s.v[1] < nv)
                       ? topology_.edge_id(s.v[0], s.v[1])
                       : -1;
      if (e < 0) {
         throw std::invalid_argument("Mesh: boundary segment " +
                                     std::to_string(i) +
                                     " is not an element edge");
      }
      if (topology_.edge_elements(e).size() != 1) {
         throw std::invalid_argument("Mesh: boundary segment " +
                                     std::to_string(i) +
                                     " lies between two elements");
      }
   }
   geom_basis_ = make_geom_basis(1, NodeKind::GaussLobatto);
}

void Mesh::set_nodes(NodalField nodes)
{
   nodes_ = std::move(nodes);
   geom_basis_ = make_geom_basis(nodes_->order, nodes_->kind);
}

std::vector<Vec2> Mesh::element_control_points(int k) const
{
   if (nodes_) {
      auto dofs = nodes_->layout.dofs(k);
      std::vector<Vec2> ctrl(dofs.size());
      for (size_t i = 0; i < dofs.size(); i++) {
         ctrl[i] = nodes_->coords[dofs[i]];
      }
      return ctrl;
   }
   const auto &v = elements_[k].v;
   // Lattice order for the bilinear map: (0,0), (1,0), (0,1), (1,1).
   return {vertices_[v[0]], vertices_[v[1]], vertices_[v[3]], vertices_[v[2]]};
}

ElementTransformation Mesh::transformation(int k) const
{
   if (k < 0 || k >= n_elements()) {
      throw std::invalid_argument("Mesh::transformation: element index out "
                                  "of range");
   }
   ElementTransformation tr(geom_basis_, element_control_points(k));
   const QuadratureRule1D rule = gauss_legendre(geometry_order() + 2);
   for (double qy : rule.points) {
      for (double qx : rule.points) {
         if (!(tr.jacobian(qx, qy).det() > 0.0)) {
            throw std::runtime_error("Mesh::transformation: inverted element " +
                                     std::to_string(k));
         }
      }
   }
   return tr;
}

double Mesh::element_diameter(int k) const
{
   const auto &v = elements_[k].v;
   double d = 0.0;
   for (int i = 0; i < 4; i++) {
      for (int j = i + 1; j < 4; j++) {
         const double dx = vertices_[v[i]].x - vertices_[v[j]].x;
         const double dy = vertices_[v[i]].y - vertices_[v[j]].y;
         d = std::max(d, std::hypot(dx, dy));
      }
   }
   return d;
}

bool Mesh::has_boundary_attribute(int attr) const
{
   return std::any_of(boundary_.begin(), boundary_.end(),
                      [attr](const BoundarySegment &s)
                      { return s.attribute == attr; });
}

Mesh make_cartesian(int nx, int ny, double width, double height)
{
   if (nx < 1 || ny < 1) {
      throw std::invalid_argument("make_cartesian: need nx, ny >= 1");
   }
   if (!(width > 0.0) || !(height > 0.0)) {
      throw std::invalid_argument("make_cartesian: need positive extents");
   }
   auto vid = [nx](int i, int j) { return i + j * (nx + 1); };
   std::vector<Vec2> vertices;
   vertices.reserve((nx + 1) * (ny + 1));
   for (int j = 0; j <= ny; j++) {
      for (int i = 0; i <= nx; i++) {
         vertices.push_back({width * i / nx, height * j / ny});
      }
   }
   std::vector<MeshElement> elements;
   elements.reserve(nx * ny);
   for (int j = 0; j < ny; j++) {
      for (int i = 0; i < nx; i++) {
         elements.push_back(
            {1, {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)}});
      }
   }
   std::vector<BoundarySegment> boundary;
   for (int i = 0; i < nx; i++) {
      boundary.push_back({1, {vid(i, 0), vid(i + 1, 0)}});
   }
   for (int j = 0; j < ny; j++) {
      boundary.push_back({2, {vid(nx, j), vid(nx, j + 1)}});
   }
   for (int i = 0; i < nx; i++) {
      boundary.push_back({3, {vid(i, ny), vid(i + 1, ny)}});
   }
   for (int j = 0; j < ny; j++) {
      boundary.push_back({4, {vid(0, j), vid(0, j + 1)}});
   }
   return Mesh(std::move(vertices), std::move(elements), std::move(boundary));
}

Mesh curve_mesh(const Mesh &mesh, int order,
                const std::function<Vec2(Vec2)> &map, NodeKind kind)
{
   if (order < 1) {
      throw std::invalid_argument("curve_mesh: order must be >= 1");
   }
   if (kind == NodeKind::GaussLegendre) {
      throw std::invalid_argument("curve_mesh: geometry nodes must include "
                                  "the endpoints");
   }
   std::vector<Vec2> vertices(mesh.n_vertices());
   for (int i = 0; i < mesh.n_vertices(); i++) {
      vertices[i] = map(mesh.vertex(i));
   }
   Mesh curved(std::move(vertices), mesh.elements(), mesh.boundary_segments());

   NodalField nodes;
   nodes.order = order;
   nodes.kind = kind;
   nodes.layout = build_h1_layout(mesh.n_vertices(), mesh.topology(),
                                  mesh.elements(), order);
   nodes.coords.resize(nodes.layout.n_dofs);
   const Basis1D lattice(order, kind);
   const auto &xi = lattice.nodes();
   for (int k = 0; k < mesh.n_elements(); k++) {
      const ElementTransformation tr = mesh.transformation(k);
      auto dofs = nodes.layout.dofs(k);
      for (int b = 0; b <= order; b++) {
         for (int a = 0; a <= order; a++) {
            nodes.coords[dofs[a + b * (order + 1)]] =
               map(tr.point(xi[a], xi[b]));
         }
      }
   }
   curved.set_nodes(std::move(nodes));

   const QuadratureRule1D rule = gauss_legendre(order + 2);
   for (int k = 0; k < curved.n_elements(); k++) {
      const ElementTransformation tr(curved.geom_basis_,
                                     curved.element_control_points(k));
      for (double qy : rule.points) {
         for (double qx : rule.points) {
            if (!(tr.jacobian(qx, qy).det() > 0.0)) {
               throw std::runtime_error("curve_mesh: inverted element " +
                                        std::to_string(k));
            }
         }
      }
   }
   return curved;
}

Vec2 edge_ref_point(int le, double s)
{
   switch (le) {
      case 0: return {s, 0.0};
      case 1: return {1.0, s};
      case 2: return {1.0 - s, 1.0};
      case 3: return {0.0, 1.0 - s};
   }
   throw std::invalid_argument("edge_ref_point: local edge must be 0..3");
}

} // namespace tensorfem
