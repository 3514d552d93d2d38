// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/driver.hpp"

#include "tensorfem/mesh_io.hpp"
#include "tensorfem/quadrature.hpp"
#include "tensorfem/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace tensorfem {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Front layer steepness and radius.
constexpr double kFrontSlope = 60.0;
constexpr double kFrontRadius = 0.7;

Mesh build_mesh(const RunConfig &config)
{
   if (!config.mesh_path.empty()) {
      return load_native_file(config.mesh_path);
   }
   return make_cartesian(config.cartesian_n, config.cartesian_n);
}

std::vector<int> boundary_attributes(const Mesh &mesh)
{
   std::set<int> attrs;
   for (const BoundarySegment &s : mesh.boundary_segments()) {
      attrs.insert(s.attribute);
   }
   if (attrs.empty()) {
      throw std::runtime_error("driver: mesh has no boundary to constrain");
   }
   return {attrs.begin(), attrs.end()};
}

double max_diameter(const Mesh &mesh)
{
   double h = 0.0;
   for (int k = 0; k < mesh.n_elements(); k++) {
      h = std::max(h, mesh.element_diameter(k));
   }
   return h;
}

void fill_orders(std::vector<ConvergenceRow> &rows)
{
   for (size_t i = 1; i < rows.size(); i++) {
      const double prev = rows[i - 1].l2_error;
      const double cur = rows[i].l2_error;
      if (prev > 0.0 && cur > 0.0 && std::isfinite(prev) &&
          std::isfinite(cur)) {
         rows[i].order = std::log2(prev / cur);
      }
   }
}

} // namespace

ManufacturedSolution manufactured_solution(SolutionId id)
{
   if (id == SolutionId::Sine) {
      return {[](Vec2 p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); },
              [](Vec2 p) {
                 return Vec2{kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y),
                             kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
              },
              [](Vec2 p) {
                 return 2.0 * kPi * kPi * std::sin(kPi * p.x) *
                        std::sin(kPi * p.y);
              }};
   }
   // u = atan(a(r - r0)): for a radial profile g(r), lap u = g'' + g'/r.
   const double a = kFrontSlope, r0 = kFrontRadius;
   return {[=](Vec2 p) {
              return std::atan(a * (std::hypot(p.x, p.y) - r0));
           },
           [=](Vec2 p) {
              const double r = std::hypot(p.x, p.y);
              const double w = a * (r - r0);
              const double s = a / ((1.0 + w * w) * r);
              return Vec2{s * p.x, s * p.y};
           },
           [=](Vec2 p) {
              const double r = std::hypot(p.x, p.y);
              const double w = a * (r - r0);
              const double q = 1.0 + w * w;
              return 2.0 * a * a * w / (q * q) - a / (r * q);
           }};
}

void validate(const RunConfig &config)
{
   if (config.cartesian_n < 1) {
      throw std::invalid_argument("driver: cartesian size must be >= 1");
   }
   if (config.order < 1) {
      throw std::invalid_argument("driver: order must be >= 1");
   }
   if (!(config.tol > 0.0)) {
      throw std::invalid_argument("driver: tolerance must be positive");
   }
   if (config.max_iters < 1) {
      throw std::invalid_argument("driver: max iterations must be >= 1");
   }
   if (!(config.amr.theta > 0.0) || config.amr.theta > 1.0) {
      throw std::invalid_argument("driver: theta must be in (0, 1]");
   }
   if (config.amr.iters < 0 || config.amr.irregularity_limit < 0 ||
       config.convergence_levels < 0) {
      throw std::invalid_argument("driver: counts must be >= 0");
   }
   if (config.threads < 1) {
      throw std::invalid_argument("driver: threads must be >= 1");
   }
}

RunResult solve_on_space(std::shared_ptr<const FeSpace> space,
                         const ManufacturedSolution &sol,
                         const RunConfig &config)
{
   BilinearForm a(*space, config.assembly);
   a.add_diffusion([](Vec2) { return 1.0; });
   a.assemble(config.threads);
   const LinearForm b(*space, sol.f);

   const std::vector<int> ess =
      space->essential_true_dofs(boundary_attributes(space->mesh()));
   const GridFunction interp = project_coefficient(*space, sol.u);
   const Vector values = space->local_to_true(interp.values());
   const LinearSystem sys = form_linear_system(a, b, ess, values);

   // Solve for the correction to x0; the constrained operator keeps the
   // essential entries of the iterates at zero, so x = x0 + y carries the
   // boundary values exactly.
   Vector rhs = sys.rhs;
   for (int e : ess) {
      rhs[e] = 0.0;
   }
   Vector diag;
   const Vector *precond = nullptr;
   if (config.prec == Preconditioner::Jacobi) {
      diag = a.diagonal_true();
      for (int e : ess) {
         diag[e] = 1.0;
      }
      precond = &diag;
   }
   const auto t0 = std::chrono::steady_clock::now();
   const CgResult cg =
      cg_solve(*sys.op, rhs, config.tol, config.max_iters, precond);
   const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - t0;

   Vector x = cg.x;
   for (int i = 0; i < x.size(); i++) {
      x[i] += sys.x0[i];
   }

   RunResult out;
   out.space = space;
   out.u = recover_fem_solution(*space, x);
   out.converged = cg.converged;
   ConvergenceRow row;
   row.n_true_dofs = space->n_true_dofs();
   row.h = max_diameter(space->mesh());
   row.l2_error = compute_l2_error(*out.u, sol.u);
   row.order = std::numeric_limits<double>::quiet_NaN();
   row.cg_iterations = cg.iterations;
   row.solve_seconds = elapsed.count();
   row.pa_stored_reals = a.stored_reals();
   out.rows.push_back(row);
   return out;
}

RunResult solve_poisson(const RunConfig &config)
{
   validate(config);
   const auto space = std::make_shared<const FeSpace>(
      build_mesh(config), FeCollection(FeFamily::H1, config.order));
   return solve_on_space(space, manufactured_solution(config.solution),
                         config);
}

RunResult convergence_study(const RunConfig &config)
{
   validate(config);
   if (config.convergence_levels < 1) {
      throw std::invalid_argument("driver: study needs at least one level");
   }
   const ManufacturedSolution sol = manufactured_solution(config.solution);
   const auto forest = std::make_shared<NcForest>(build_mesh(config));
   RunResult out;
   out.forest = forest;
   for (int level = 0;; level++) {
      const auto space = std::make_shared<const FeSpace>(
         *forest, FeCollection(FeFamily::H1, config.order));
      RunResult solve = solve_on_space(space, sol, config);
      out.rows.push_back(solve.rows[0]);
      out.converged = out.converged && solve.converged;
      out.space = solve.space;
      out.u = std::move(solve.u);
      if (level == config.convergence_levels - 1 || !out.converged) {
         break;
      }
      std::vector<std::pair<int, SplitKind>> marks;
      marks.reserve(forest->n_leaves());
      for (int leaf = 0; leaf < forest->n_leaves(); leaf++) {
         marks.emplace_back(leaf, SplitKind::Iso);
      }
      forest->refine(marks);
   }
   fill_orders(out.rows);
   return out;
}

RunResult amr_loop(const RunConfig &config)
{
   validate(config);
   const ManufacturedSolution sol = manufactured_solution(config.solution);
   const auto forest = std::make_shared<NcForest>(
      build_mesh(config), config.amr.irregularity_limit);
   RunResult out;
   out.forest = forest;
   for (int iter = 0;; iter++) {
      const auto space = std::make_shared<const FeSpace>(
         *forest, FeCollection(FeFamily::H1, config.order));
      RunResult solve = solve_on_space(space, sol, config);
      out.rows.push_back(solve.rows[0]);
      out.converged = out.converged && solve.converged;
      out.space = solve.space;
      out.u = std::move(solve.u);
      if (iter == config.amr.iters || !out.converged) {
         break;
      }
      const ElementErrors err =
         element_errors(*out.u, sol, config.amr.anisotropic);
      const std::vector<std::pair<int, SplitKind>> marks =
         select_refinements(err.l2, err.directional, config.amr.theta);
      if (marks.empty()) {
         break;
      }
      forest->refine(marks);
   }
   fill_orders(out.rows);
   return out;
}

ElementErrors element_errors(const GridFunction &u,
                             const ManufacturedSolution &sol,
                             bool with_directional)
{
   const FeSpace &space = u.space();
   const Mesh &mesh = space.mesh();
   const QuadratureRule1D rule =
      gauss_legendre(space.collection().order() + 3);
   const int nq = static_cast<int>(rule.points.size());

   ElementErrors out;
   out.l2.resize(mesh.n_elements());
   if (with_directional) {
      out.directional.resize(mesh.n_elements());
   }
   for (int k = 0; k < mesh.n_elements(); k++) {
      const ElementTransformation tr = mesh.transformation(k);
      double e2 = 0.0, ex2 = 0.0, ey2 = 0.0;
      for (int qy = 0; qy < nq; qy++) {
         for (int qx = 0; qx < nq; qx++) {
            const double xh = rule.points[qx], yh = rule.points[qy];
            const double wq = rule.weights[qx] * rule.weights[qy];
            const ElementTransformation::Jacobian j = tr.jacobian(xh, yh);
            const double scale = wq * j.det();
            const Vec2 p = tr.point(xh, yh);
            const double d = u.eval(k, xh, yh) - sol.u(p);
            e2 += scale * d * d;
            if (with_directional) {
               const Vec2 gh = u.eval_grad(k, tr, xh, yh);
               const Vec2 ge = sol.grad(p);
               const double dx = gh.x - ge.x, dy = gh.y - ge.y;
               // Error-gradient components along the reference axes.
               const double rx = j.dxdx * dx + j.dydx * dy;
               const double ry = j.dxdy * dx + j.dydy * dy;
               ex2 += scale * rx * rx;
               ey2 += scale * ry * ry;
            }
         }
      }
      out.l2[k] = std::sqrt(e2);
      if (with_directional) {
         out.directional[k] = {ex2, ey2};
      }
   }
   return out;
}

std::vector<std::pair<int, SplitKind>>
select_refinements(const std::vector<double> &errors,
                   const std::vector<Vec2> &directional, double theta)
{
   if (!(theta > 0.0) || theta > 1.0) {
      throw std::invalid_argument("driver: theta must be in (0, 1]");
   }
   if (!directional.empty() && directional.size() != errors.size()) {
      throw std::invalid_argument(
         "driver: directional indicator count mismatch");
   }
   double max_e = 0.0;
   for (const double e : errors) {
      max_e = std::max(max_e, e);
   }
   std::vector<std::pair<int, SplitKind>> marks;
   if (max_e <= 0.0) {
      return marks;
   }
   for (size_t j = 0; j < errors.size(); j++) {
      if (errors[j] < theta * max_e) {
         continue;
      }
      SplitKind kind = SplitKind::Iso;
      if (!directional.empty()) {
         const double ix = directional[j].x, iy = directional[j].y;
         if (ix >= 2.0 * iy && iy < 2.0 * ix) {
            kind = SplitKind::X;
         } else if (iy >= 2.0 * ix && ix < 2.0 * iy) {
            kind = SplitKind::Y;
         }
      }
      marks.emplace_back(static_cast<int>(j), kind);
   }
   return marks;
}

std::string report(const std::vector<ConvergenceRow> &rows, bool with_timing)
{
   std::string out;
   char line[160];
   if (with_timing) {
      std::snprintf(line, sizeof(line), "%8s%12s%12s%8s%8s%12s%13s\n", "dofs",
                    "h", "l2_error", "order", "iters", "seconds", "pa_reals");
   } else {
      std::snprintf(line, sizeof(line), "%8s%12s%12s%8s%8s%13s\n", "dofs",
                    "h", "l2_error", "order", "iters", "pa_reals");
   }
   out += line;
   for (const ConvergenceRow &row : rows) {
      char order[16];
      if (std::isfinite(row.order)) {
         std::snprintf(order, sizeof(order), "%.2f", row.order);
      } else {
         std::snprintf(order, sizeof(order), "--");
      }
      if (with_timing) {
         std::snprintf(line, sizeof(line), "%8d%12.2e%12.2e%8s%8d%12.4f%13lld\n",
                       row.n_true_dofs, row.h, row.l2_error, order,
                       row.cg_iterations, row.solve_seconds,
                       static_cast<long long>(row.pa_stored_reals));
      } else {
         std::snprintf(line, sizeof(line), "%8d%12.2e%12.2e%8s%8d%13lld\n",
                       row.n_true_dofs, row.h, row.l2_error, order,
                       row.cg_iterations,
                       static_cast<long long>(row.pa_stored_reals));
      }
      out += line;
   }
   return out;
}

void write_solution_vtk(const GridFunction &u, const ManufacturedSolution &sol,
                        const std::string &path)
{
   const Mesh &mesh = u.space().mesh();
   const std::vector<VtkField> fields = {
      {"u", [&u](int k, double xh, double yh) { return u.eval(k, xh, yh); }},
      {"error", [&u, &sol, &mesh](int k, double xh, double yh) {
          return u.eval(k, xh, yh) -
                 sol.u(mesh.transformation(k).point(xh, yh));
       }}};
   print_vtk_file(mesh, fields, std::max(u.space().collection().order(), 1),
                  path);
}

} // namespace tensorfem
