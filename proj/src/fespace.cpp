// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace tensorfem {

FeCollection::FeCollection(FeFamily family, int order, MapType map_type)
   : family_(family), order_(order), map_type_(map_type)
{
   if (family_ == FeFamily::H1) {
      if (order_ < 1) {
         throw std::invalid_argument("FeCollection: H1 needs order >= 1, got " +
                                     std::to_string(order_));
      }
      if (map_type_ != MapType::Value) {
         throw std::invalid_argument("FeCollection: H1 is VALUE-mapped");
      }
   } else if (order_ < 0) {
      throw std::invalid_argument("FeCollection: order must be >= 0, got " +
                                  std::to_string(order_));
   }
}

FeSpace::FeSpace(const Mesh &mesh, const FeCollection &coll)
   : mesh_(mesh), coll_(coll),
     basis_(std::make_shared<Basis1D>(coll.order(), coll.node_kind()))
{
   build_layout();
   build_conforming();
}

FeSpace::FeSpace(const NcForest &forest, const FeCollection &coll)
   : mesh_(forest.leaf_mesh()), coll_(coll),
     basis_(std::make_shared<Basis1D>(coll.order(), coll.node_kind()))
{
   build_layout();
   if (coll_.family() == FeFamily::H1) {
      build_constrained(forest);
   } else {
      // Discontinuous spaces have no continuity constraints to enforce.
      build_conforming();
   }
}

void FeSpace::build_layout()
{
   if (coll_.family() == FeFamily::H1) {
      layout_ = build_h1_layout(mesh_.n_vertices(), mesh_.topology(),
                                mesh_.elements(), coll_.order());
   } else {
      layout_ = build_l2_layout(mesh_.n_elements(), coll_.order());
   }
}

void FeSpace::build_conforming()
{
   conforming_ = true;
   true_index_.resize(layout_.n_dofs);
   true_dofs_.resize(layout_.n_dofs);
   for (int d = 0; d < layout_.n_dofs; d++) {
      true_index_[d] = d;
      true_dofs_[d] = d;
   }
   P_ = SparseMatrix::identity(layout_.n_dofs);
}

void FeSpace::build_constrained(const NcForest &forest)
{
   const int p = coll_.order();
   const MeshTopology &topo = mesh_.topology();
   const int per_edge = p - 1;
   const int edge_base = mesh_.n_vertices();
   // DOF at lattice position n = 1..p-1 along the lo-to-hi direction of an
   // edge; endpoints are the vertex DOFs themselves.
   auto edge_dof = [&](int edge, int n) {
      return edge_base + edge * per_edge + (n - 1);
   };

   // One interpolation row per slave DOF: its nodal value expanded in the
   // trace of the master edge.  Edge traces are 1D polynomials, so a slave
   // node at master parameter tau takes the master's 1D basis values there.
   const auto relations = forest.edge_relations();
   const std::vector<double> &nodes = basis_->nodes();
   std::vector<double> w(p + 1);
   std::map<int, std::map<int, double>> rows;
   for (const auto &[key, rel] : relations) {
      if (rel.kind != EdgeRelation::Kind::Slave) {
         continue;
      }
      const int master_edge = topo.edge_id(rel.master[0], rel.master[1]);
      const int slave_edge = topo.edge_id(key[0], key[1]);
      if (master_edge < 0 || slave_edge < 0) {
         throw std::logic_error("FeSpace: relation edge missing from mesh");
      }
      std::vector<int> trace(p + 1), slave(p + 1);
      trace[0] = rel.master[0];
      trace[p] = rel.master[1];
      slave[0] = key[0];
      slave[p] = key[1];
      for (int n = 1; n < p; n++) {
         trace[n] = edge_dof(master_edge, n);
         slave[n] = edge_dof(slave_edge, n);
      }
      for (int n = 0; n <= p; n++) {
         const int sdof = slave[n];
         // Slave endpoints that coincide with master endpoints are the
         // master's own vertices, not constrained DOFs.
         if (sdof == rel.master[0] || sdof == rel.master[1]) {
            continue;
         }
         // A hanging vertex is shared by two slave edges of its master;
         // both visits would write the same row.
         if (rows.count(sdof)) {
            continue;
         }
         const double t = nodes[n];
         const double tau = rel.aligned ? rel.a + (rel.b - rel.a) * t
                                        : rel.b - (rel.b - rel.a) * t;
         basis_->eval(tau, w.data());
         std::map<int, double> &row = rows[sdof];
         for (int j = 0; j <= p; j++) {
            if (w[j] != 0.0) {
               row[trace[j]] += w[j];
            }
         }
      }
   }

   if (rows.empty()) {
      build_conforming();
      return;
   }

   // A master's endpoint can itself hang on a coarser edge, so rows may
   // reference constrained DOFs.  Substitute until every row references
   // true DOFs only; chain length is bounded by the forest depth.
   for (int pass = 0;; pass++) {
      if (pass > 64) {
         throw std::logic_error("FeSpace: constraint chain did not resolve");
      }
      bool changed = false;
      for (auto &entry : rows) {
         bool dirty = false;
         for (const auto &term : entry.second) {
            if (rows.count(term.first)) {
               dirty = true;
               break;
            }
         }
         if (!dirty) {
            continue;
         }
         changed = true;
         std::map<int, double> resolved;
         for (const auto &term : entry.second) {
            const auto it = rows.find(term.first);
            if (it == rows.end()) {
               resolved[term.first] += term.second;
            } else {
               for (const auto &sub : it->second) {
                  resolved[sub.first] += term.second * sub.second;
               }
            }
         }
         entry.second = std::move(resolved);
      }
      if (!changed) {
         break;
      }
   }

   conforming_ = false;
   true_index_.assign(layout_.n_dofs, -1);
   true_dofs_.clear();
   for (int d = 0; d < layout_.n_dofs; d++) {
      if (!rows.count(d)) {
         true_index_[d] = static_cast<int>(true_dofs_.size());
         true_dofs_.push_back(d);
      }
   }

   SparseMatrix::Builder builder(layout_.n_dofs, n_true_dofs());
   for (int d = 0; d < layout_.n_dofs; d++) {
      if (true_index_[d] >= 0) {
         builder.add(d, true_index_[d], 1.0);
         continue;
      }
      for (const auto &term : rows.at(d)) {
         if (true_index_[term.first] < 0) {
            throw std::logic_error("FeSpace: unresolved constraint row");
         }
         builder.add(d, true_index_[term.first], term.second);
      }
   }
   P_ = builder.build();
}

std::vector<int>
FeSpace::essential_true_dofs(const std::vector<int> &attrs) const
{
   if (coll_.family() != FeFamily::H1) {
      throw std::invalid_argument(
         "essential_true_dofs: needs a continuous space");
   }
   for (int a : attrs) {
      if (!mesh_.has_boundary_attribute(a)) {
         throw std::invalid_argument(
            "essential_true_dofs: no boundary attribute " + std::to_string(a));
      }
   }
   const std::set<int> marked(attrs.begin(), attrs.end());
   const MeshTopology &topo = mesh_.topology();
   const int p = coll_.order();
   std::set<int> dofs;
   for (int b = 0; b < mesh_.n_boundary(); b++) {
      const BoundarySegment &s = mesh_.boundary(b);
      if (!marked.count(s.attribute)) {
         continue;
      }
      dofs.insert(s.v[0]);
      dofs.insert(s.v[1]);
      const int e = topo.edge_id(s.v[0], s.v[1]);
      for (int n = 1; n < p; n++) {
         dofs.insert(mesh_.n_vertices() + e * (p - 1) + (n - 1));
      }
   }
   std::vector<int> out;
   for (int d : dofs) {
      if (true_index_[d] >= 0) {
         out.push_back(true_index_[d]);
      }
   }
   std::sort(out.begin(), out.end());
   return out;
}

Vector FeSpace::true_to_local(const Vector &X) const
{
   if (X.size() != n_true_dofs()) {
      throw std::invalid_argument("true_to_local: size mismatch");
   }
   return spmv(P_, X);
}

Vector FeSpace::local_to_true(const Vector &x) const
{
   if (x.size() != n_dofs()) {
      throw std::invalid_argument("local_to_true: size mismatch");
   }
   Vector X(n_true_dofs());
   for (int t = 0; t < n_true_dofs(); t++) {
      X[t] = x[true_dofs_[t]];
   }
   return X;
}

GridFunction::GridFunction(const FeSpace &space)
   : space_(&space), values_(space.n_dofs())
{
}

void GridFunction::set_from_true(const Vector &X)
{
   values_ = space_->true_to_local(X);
}

double GridFunction::eval(int element, double xh, double yh) const
{
   const FeSpace &fes = *space_;
   const int nd = fes.collection().order() + 1;
   std::vector<double> bx(nd), by(nd);
   fes.basis().eval(xh, bx.data());
   fes.basis().eval(yh, by.data());
   const std::span<const int> dofs = fes.element_dofs(element);
   double u = 0.0;
   for (int b = 0; b < nd; b++) {
      double s = 0.0;
      for (int a = 0; a < nd; a++) {
         s += bx[a] * values_[dofs[b * nd + a]];
      }
      u += by[b] * s;
   }
   if (fes.collection().map_type() == MapType::Integral) {
      const ElementTransformation tr = fes.mesh().transformation(element);
      u /= tr.jacobian(xh, yh).det();
   }
   return u;
}

Vec2 GridFunction::eval_grad(int element, const ElementTransformation &tr,
                             double xh, double yh) const
{
   const FeSpace &fes = *space_;
   if (fes.collection().map_type() != MapType::Value) {
      throw std::invalid_argument(
         "eval_grad: gradients need a VALUE-mapped space");
   }
   const int nd = fes.collection().order() + 1;
   std::vector<double> bx(nd), by(nd), dx(nd), dy(nd);
   fes.basis().eval(xh, bx.data(), dx.data());
   fes.basis().eval(yh, by.data(), dy.data());
   const std::span<const int> dofs = fes.element_dofs(element);
   double du_dxh = 0.0, du_dyh = 0.0;
   for (int b = 0; b < nd; b++) {
      double sb = 0.0, sd = 0.0;
      for (int a = 0; a < nd; a++) {
         const double u = values_[dofs[b * nd + a]];
         sb += bx[a] * u;
         sd += dx[a] * u;
      }
      du_dxh += by[b] * sd;
      du_dyh += dy[b] * sb;
   }
   // grad_x u = J^{-T} grad_xh u
   const ElementTransformation::Jacobian j = tr.jacobian(xh, yh);
   const double det = j.det();
   return {(j.dydy * du_dxh - j.dydx * du_dyh) / det,
           (j.dxdx * du_dyh - j.dxdy * du_dxh) / det};
}

Vec2 GridFunction::eval_grad(int element, double xh, double yh) const
{
   const ElementTransformation tr = space_->mesh().transformation(element);
   return eval_grad(element, tr, xh, yh);
}

GridFunction project_coefficient(const FeSpace &space,
                                 const std::function<double(Vec2)> &f)
{
   GridFunction g(space);
   const int nd = space.collection().order() + 1;
   const std::vector<double> &nodes = space.basis().nodes();
   const bool integral = space.collection().map_type() == MapType::Integral;
   const Mesh &mesh = space.mesh();
   for (int k = 0; k < mesh.n_elements(); k++) {
      const ElementTransformation tr = mesh.transformation(k);
      const std::span<const int> dofs = space.element_dofs(k);
      for (int b = 0; b < nd; b++) {
         for (int a = 0; a < nd; a++) {
            double v = f(tr.point(nodes[a], nodes[b]));
            if (integral) {
               v *= tr.jacobian(nodes[a], nodes[b]).det();
            }
            g.values()[dofs[b * nd + a]] = v;
         }
      }
   }
   return g;
}

double compute_l2_error(const GridFunction &g,
                        const std::function<double(Vec2)> &u_exact)
{
   const FeSpace &fes = g.space();
   const Mesh &mesh = fes.mesh();
   const int nd = fes.collection().order() + 1;
   const QuadratureRule1D rule = gauss_legendre(fes.collection().order() + 3);
   const int nq = rule.size();
   const EvalMatrices em = eval_matrices(fes.basis(), rule);
   const bool integral = fes.collection().map_type() == MapType::Integral;
   double err2 = 0.0;
   for (int k = 0; k < mesh.n_elements(); k++) {
      const ElementTransformation tr = mesh.transformation(k);
      const std::span<const int> dofs = fes.element_dofs(k);
      for (int qy = 0; qy < nq; qy++) {
         for (int qx = 0; qx < nq; qx++) {
            double u = 0.0;
            for (int b = 0; b < nd; b++) {
               double s = 0.0;
               for (int a = 0; a < nd; a++) {
                  s += em.B1d(qx, a) * g.values()[dofs[b * nd + a]];
               }
               u += em.B1d(qy, b) * s;
            }
            const double det =
               tr.jacobian(rule.points[qx], rule.points[qy]).det();
            if (integral) {
               u /= det;
            }
            const double d =
               u - u_exact(tr.point(rule.points[qx], rule.points[qy]));
            err2 += rule.weights[qx] * rule.weights[qy] * det * d * d;
         }
      }
   }
   return std::sqrt(err2);
}

} // namespace tensorfem
