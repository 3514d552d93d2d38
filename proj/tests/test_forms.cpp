// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "doctest.h"

#include "tensorfem/forms.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace tensorfem;

namespace {

Vector random_vector(int n, unsigned seed)
{
   std::mt19937 gen(seed);
   std::uniform_real_distribution<double> dist(-1.0, 1.0);
   Vector x(n);
   for (int i = 0; i < n; i++) {
      x[i] = dist(gen);
   }
   return x;
}

double one(Vec2) { return 1.0; }

// Strictly positive and non-constant on the unit square.
double varying(Vec2 p) { return 1.0 + p.x + 2.0 * p.y; }

Mesh curved_quad_mesh()
{
   return curve_mesh(make_cartesian(2, 2), 2, [](Vec2 p) {
      return Vec2{p.x * (1.0 + 0.2 * p.y), p.y * (1.0 + 0.1 * p.x)};
   });
}

NcForest mixed_forest()
{
   NcForest forest(make_cartesian(2, 2));
   forest.refine({{0, SplitKind::Iso}, {2, SplitKind::X}});
   forest.refine({{3, SplitKind::Iso}, {4, SplitKind::Y}});
   return forest;
}

// Lattice index -> counterclockwise corner index for order 1.
constexpr int kCcw[4] = {0, 1, 3, 2};

constexpr double kDiffusion[4][4] = {{4, -1, -2, -1},
                                     {-1, 4, -1, -2},
                                     {-2, -1, 4, -1},
                                     {-1, -2, -1, 4}};
constexpr double kMass[4][4] = {{4, 2, 1, 2},
                                {2, 4, 2, 1},
                                {1, 2, 4, 2},
                                {2, 1, 2, 4}};

void check_mode_equivalence(const FeSpace &space, IntegratorKind kind,
                            const Coefficient &coeff, unsigned seed)
{
   BilinearForm full(space, AssemblyMode::Full);
   BilinearForm partial(space, AssemblyMode::Partial);
   for (BilinearForm *form : {&full, &partial}) {
      if (kind == IntegratorKind::Diffusion) {
         form->add_diffusion(coeff);
      } else {
         form->add_mass(coeff);
      }
      form->assemble();
   }
   const int n = space.n_true_dofs();
   Vector yf(n), yp(n);
   for (int trial = 0; trial < 3; trial++) {
      const Vector x = random_vector(n, seed + trial);
      full.mult_true(x, yf);
      partial.mult_true(x, yp);
      double diff = 0.0, scale = 0.0;
      for (int i = 0; i < n; i++) {
         diff += (yf[i] - yp[i]) * (yf[i] - yp[i]);
         scale += yf[i] * yf[i];
      }
      CHECK(std::sqrt(diff) <= 1e-12 * std::sqrt(scale));
   }
}

} // namespace

TEST_CASE("forms: reference local matrices on the unit element")
{
   const FeSpace space(make_cartesian(1, 1), {FeFamily::H1, 1});
   const DenseMatrix diff =
      local_element_matrix(space, IntegratorKind::Diffusion, one, 0);
   const DenseMatrix mass =
      local_element_matrix(space, IntegratorKind::Mass, one, 0);
   for (int i = 0; i < 4; i++) {
      for (int j = 0; j < 4; j++) {
         CHECK(diff(i, j) ==
               doctest::Approx(kDiffusion[kCcw[i]][kCcw[j]] / 6.0)
                  .epsilon(1e-13));
         CHECK(mass(i, j) ==
               doctest::Approx(kMass[kCcw[i]][kCcw[j]] / 36.0)
                  .epsilon(1e-13));
      }
   }
}

TEST_CASE("forms: local diffusion rows annihilate constants")
{
   const FeSpace space(curved_quad_mesh(), {FeFamily::H1, 3});
   for (int k : {0, 3}) {
      const DenseMatrix loc =
         local_element_matrix(space, IntegratorKind::Diffusion, varying, k);
      double scale = 0.0;
      for (int i = 0; i < loc.rows(); i++) {
         for (int j = 0; j < loc.cols(); j++) {
            scale = std::max(scale, std::abs(loc(i, j)));
         }
      }
      for (int i = 0; i < loc.rows(); i++) {
         double s = 0.0;
         for (int j = 0; j < loc.cols(); j++) {
            s += loc(i, j);
         }
         CHECK(std::abs(s) <= 1e-12 * scale);
      }
   }
}

TEST_CASE("forms: global mass applied to ones integrates the area")
{
   for (int p : {1, 2}) {
      const FeSpace space(make_cartesian(3, 2, 2.0, 1.0), {FeFamily::H1, p});
      BilinearForm m(space, AssemblyMode::Full);
      m.add_mass(one);
      m.assemble();
      const Vector ones(space.n_true_dofs(), 1.0);
      Vector y(space.n_true_dofs());
      m.mult_true(ones, y);
      double total = 0.0;
      for (int i = 0; i < y.size(); i++) {
         total += y[i];
      }
      CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
   }
}

TEST_CASE("forms: mass scales linearly in the coefficient")
{
   const FeSpace space(make_cartesian(2, 2), {FeFamily::H1, 2});
   BilinearForm m1(space, AssemblyMode::Full);
   m1.add_mass(one);
   m1.assemble();
   BilinearForm m2(space, AssemblyMode::Full);
   m2.add_mass([](Vec2) { return 2.0; });
   m2.assemble();
   const SparseMatrix &a1 = m1.matrix();
   const SparseMatrix &a2 = m2.matrix();
   REQUIRE(a1.nnz() == a2.nnz());
   for (int i = 0; i < a1.rows(); i++) {
      const std::span<const double> v1 = a1.row_vals(i);
      const std::span<const double> v2 = a2.row_vals(i);
      for (size_t c = 0; c < v1.size(); c++) {
         CHECK(v2[c] == doctest::Approx(2.0 * v1[c]).epsilon(1e-15));
      }
   }
}

TEST_CASE("forms: point factors on reference and stretched elements")
{
   const QuadratureRule1D rule = gauss_legendre(3);

   const FeSpace unit(make_cartesian(1, 1), {FeFamily::H1, 1});
   const PaData d_unit = pa_setup(unit, IntegratorKind::Diffusion, one);
   const PaData m_unit = pa_setup(unit, IntegratorKind::Mass, one);
   CHECK(d_unit.quad_1d() == 3);
   CHECK(d_unit.stored_reals() == 27);
   CHECK(m_unit.stored_reals() == 9);

   const FeSpace wide(make_cartesian(1, 1, 2.0, 1.0), {FeFamily::H1, 1});
   const PaData d_wide = pa_setup(wide, IntegratorKind::Diffusion, one);
   for (int qy = 0; qy < 3; qy++) {
      for (int qx = 0; qx < 3; qx++) {
         const double alpha = rule.weights[qx] * rule.weights[qy];
         const int q = qy * 3 + qx;
         CHECK(d_unit.d(0)[3 * q] == doctest::Approx(alpha).epsilon(1e-14));
         CHECK(std::abs(d_unit.d(0)[3 * q + 1]) <= 1e-15);
         CHECK(d_unit.d(0)[3 * q + 2] ==
               doctest::Approx(alpha).epsilon(1e-14));
         CHECK(m_unit.d(0)[q] == doctest::Approx(alpha).epsilon(1e-14));

         // J = diag(2,1): c = alpha/2, D00 = c, D11 = 4c.
         CHECK(d_wide.d(0)[3 * q] ==
               doctest::Approx(0.5 * alpha).epsilon(1e-14));
         CHECK(std::abs(d_wide.d(0)[3 * q + 1]) <= 1e-15);
         CHECK(d_wide.d(0)[3 * q + 2] ==
               doctest::Approx(2.0 * alpha).epsilon(1e-14));
      }
   }
}

TEST_CASE("forms: partial assembly matches full assembly")
{
   for (int p : {1, 2, 3}) {
      const FeSpace cart(make_cartesian(3, 2), {FeFamily::H1, p});
      check_mode_equivalence(cart, IntegratorKind::Diffusion, varying,
                             10 * p);
      check_mode_equivalence(cart, IntegratorKind::Mass, varying, 20 * p);

      const FeSpace curved(curved_quad_mesh(), {FeFamily::H1, p});
      check_mode_equivalence(curved, IntegratorKind::Diffusion, varying,
                             30 * p);
      check_mode_equivalence(curved, IntegratorKind::Mass, varying, 40 * p);

      const FeSpace nc(mixed_forest(), {FeFamily::H1, p});
      REQUIRE_FALSE(nc.conforming());
      check_mode_equivalence(nc, IntegratorKind::Diffusion, varying, 50 * p);
      check_mode_equivalence(nc, IntegratorKind::Mass, varying, 60 * p);
   }
}

TEST_CASE("forms: diffusion annihilates constant fields")
{
   const FeSpace space(mixed_forest(), {FeFamily::H1, 2});
   BilinearForm a(space, AssemblyMode::Partial);
   a.add_diffusion(varying);
   a.assemble();
   const Vector ones(space.n_true_dofs(), 1.0);
   Vector y(space.n_true_dofs());
   a.mult_true(ones, y);
   const Vector diag = a.diagonal_true();
   CHECK(y.norm_inf() <= 1e-12 * diag.norm_inf());
}

TEST_CASE("forms: single-element mass apply against the dense reference")
{
   const FeSpace space(make_cartesian(1, 1), {FeFamily::H1, 1});
   const PaData pa = pa_setup(space, IntegratorKind::Mass, one);
   const Vector x = random_vector(4, 3);
   const Vector y = pa_apply(pa, space, x);
   const std::span<const int> dofs = space.element_dofs(0);
   for (int i = 0; i < 4; i++) {
      double expect = 0.0;
      for (int j = 0; j < 4; j++) {
         expect += kMass[kCcw[i]][kCcw[j]] / 36.0 * x[dofs[j]];
      }
      CHECK(y[dofs[i]] == doctest::Approx(expect).epsilon(1e-13));
   }
}

TEST_CASE("forms: linear form on the unit element and load sums")
{
   const FeSpace unit(make_cartesian(1, 1), {FeFamily::H1, 1});
   const LinearForm quarter(unit, one);
   for (int i = 0; i < 4; i++) {
      CHECK(quarter.values()[i] == doctest::Approx(0.25).epsilon(1e-14));
   }

   // Partition of unity: the entries of b sum to the integral of f.
   const FeSpace space(make_cartesian(3, 3), {FeFamily::H1, 2});
   const LinearForm load(space, [](Vec2 p) { return p.x + p.y; });
   double total = 0.0;
   for (int i = 0; i < load.values().size(); i++) {
      total += load.values()[i];
   }
   CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

   const LinearForm zero(space, [](Vec2) { return 0.0; });
   CHECK(zero.values().norm_inf() == 0.0);
}

TEST_CASE("forms: matrix-free diagonal is exact")
{
   // Conforming curved mesh: fast path only.
   const FeSpace curved(curved_quad_mesh(), {FeFamily::H1, 2});
   // NC mesh with an indirectly constrained vertex: pair-loop path.
   NcForest forest(make_cartesian(2, 1));
   forest.refine({{0, SplitKind::Iso}});
   forest.refine({{2, SplitKind::Iso}});
   const FeSpace nc(forest, {FeFamily::H1, 2});

   for (const FeSpace *space : {&curved, &nc}) {
      for (IntegratorKind kind :
           {IntegratorKind::Diffusion, IntegratorKind::Mass}) {
         BilinearForm full(*space, AssemblyMode::Full);
         if (kind == IntegratorKind::Diffusion) {
            full.add_diffusion(varying);
         } else {
            full.add_mass(varying);
         }
         full.assemble();
         const Vector want = full.matrix().diagonal();
         const Vector got =
            pa_diagonal(pa_setup(*space, kind, varying), *space);
         REQUIRE(got.size() == want.size());
         for (int i = 0; i < want.size(); i++) {
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
            if (kind == IntegratorKind::Mass) {
               CHECK(got[i] > 0.0);
            }
         }
      }
   }
}

TEST_CASE("forms: true matrix is the projected local matrix")
{
   // Conforming: the projection is the identity, matrices match exactly.
   const FeSpace conf(make_cartesian(2, 2), {FeFamily::H1, 2});
   BilinearForm a(conf, AssemblyMode::Full);
   a.add_diffusion(one);
   a.assemble();
   REQUIRE(a.matrix().nnz() == a.local_matrix().nnz());
   for (int i = 0; i < a.matrix().rows(); i++) {
      const std::span<const double> got = a.matrix().row_vals(i);
      const std::span<const double> want = a.local_matrix().row_vals(i);
      for (size_t c = 0; c < got.size(); c++) {
         CHECK(got[c] == want[c]);
      }
   }

   // Non-conforming: action equals applying P, the local matrix, then Pt.
   const FeSpace nc(mixed_forest(), {FeFamily::H1, 2});
   BilinearForm b(nc, AssemblyMode::Full);
   b.add_diffusion(varying);
   b.assemble();
   const Vector x = random_vector(nc.n_true_dofs(), 17);
   Vector y(nc.n_true_dofs());
   b.mult_true(x, y);
   const Vector xl = nc.true_to_local(x);
   Vector yl(nc.n_dofs());
   b.local_matrix().mult(xl, yl);
   Vector want(nc.n_true_dofs());
   nc.prolongation().mult_transpose(yl, want);
   for (int i = 0; i < y.size(); i++) {
      CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-13));
   }
}

TEST_CASE("forms: full matrices are symmetric and diffusion is psd")
{
   const FeSpace space(mixed_forest(), {FeFamily::H1, 2});
   BilinearForm a(space, AssemblyMode::Full);
   a.add_diffusion(varying);
   a.add_mass(varying);
   a.assemble();
   const SparseMatrix &m = a.matrix();
   double scale = 0.0;
   for (int i = 0; i < m.rows(); i++) {
      for (const double v : m.row_vals(i)) {
         scale = std::max(scale, std::abs(v));
      }
   }
   for (int i = 0; i < m.rows(); i++) {
      const std::span<const int> cols = m.row_cols(i);
      const std::span<const double> vals = m.row_vals(i);
      for (size_t c = 0; c < cols.size(); c++) {
         CHECK(std::abs(vals[c] - m(cols[c], i)) <= 1e-12 * scale);
      }
   }

   BilinearForm d(space, AssemblyMode::Full);
   d.add_diffusion(varying);
   d.assemble();
   for (int trial = 0; trial < 5; trial++) {
      const Vector x = random_vector(space.n_true_dofs(), 70 + trial);
      Vector y(space.n_true_dofs());
      d.mult_true(x, y);
      CHECK(x.dot(y) >= -1e-12 * x.dot(x));
   }
}

TEST_CASE("forms: storage instrumentation")
{
   for (int p : {1, 2, 3}) {
      const FeSpace space(make_cartesian(2, 2), {FeFamily::H1, p});
      BilinearForm full(space, AssemblyMode::Full);
      full.add_diffusion(one);
      full.assemble();
      const std::int64_t nd4 = static_cast<std::int64_t>((p + 1) * (p + 1)) *
                               ((p + 1) * (p + 1));
      CHECK(full.local_matrix_reals() == 4 * nd4);
      CHECK(full.stored_reals() == 0);
      CHECK(full.global_matrix_nnz() == full.matrix().nnz());

      BilinearForm partial(space, AssemblyMode::Partial);
      partial.add_diffusion(one);
      partial.assemble();
      const std::int64_t nq2 = static_cast<std::int64_t>((p + 2) * (p + 2));
      CHECK(partial.stored_reals() == 4 * 3 * nq2);
      CHECK(partial.local_matrix_reals() == 0);
      CHECK(partial.global_matrix_nnz() == 0);
   }
}

TEST_CASE("forms: multiply counts of one factored element apply")
{
   for (int p : {1, 2, 3}) {
      const FeSpace space(make_cartesian(1, 1), {FeFamily::H1, p});
      BilinearForm a(space, AssemblyMode::Partial);
      a.add_diffusion(one);
      a.assemble();
      const Vector x = random_vector(space.n_true_dofs(), 5);
      Vector y(space.n_true_dofs());
      reset_multiply_count();
      a.mult_true(x, y);
      const std::uint64_t nd = p + 1, nq = p + 2;
      CHECK(multiply_count() ==
            4 * (nq * nd * nd + nq * nq * nd) + 4 * nq * nq);
   }
}

TEST_CASE("forms: results do not depend on the thread count")
{
   const FeSpace space(mixed_forest(), {FeFamily::H1, 2});
   BilinearForm serial(space, AssemblyMode::Full);
   serial.add_diffusion(varying);
   serial.assemble(1);
   BilinearForm threaded(space, AssemblyMode::Full);
   threaded.add_diffusion(varying);
   threaded.assemble(4);
   for (int i = 0; i < serial.matrix().rows(); i++) {
      const std::span<const double> a = serial.matrix().row_vals(i);
      const std::span<const double> b = threaded.matrix().row_vals(i);
      REQUIRE(a.size() == b.size());
      for (size_t c = 0; c < a.size(); c++) {
         CHECK(a[c] == b[c]);
      }
   }

   BilinearForm pa1(space, AssemblyMode::Partial);
   pa1.add_diffusion(varying);
   pa1.assemble(1);
   BilinearForm pa4(space, AssemblyMode::Partial);
   pa4.add_diffusion(varying);
   pa4.assemble(4);
   const Vector x = random_vector(space.n_true_dofs(), 23);
   Vector y1(space.n_true_dofs()), y4(space.n_true_dofs());
   pa1.mult_true(x, y1);
   pa4.mult_true(x, y4);
   for (int i = 0; i < y1.size(); i++) {
      CHECK(y1[i] == y4[i]);
   }
}

TEST_CASE("forms: constrained system construction")
{
   const FeSpace space(make_cartesian(2, 2), {FeFamily::H1, 1});
   BilinearForm a(space, AssemblyMode::Full);
   a.add_diffusion(one);
   a.assemble();
   const LinearForm b(space, one);

   SUBCASE("no essential dofs leaves the system untouched")
   {
      const LinearSystem sys = form_linear_system(a, b, {}, Vector(9));
      Vector pb(9);
      space.prolongation().mult_transpose(b.values(), pb);
      for (int i = 0; i < 9; i++) {
         CHECK(sys.rhs[i] == pb[i]);
         CHECK(sys.x0[i] == 0.0);
      }
      const Vector x = random_vector(9, 31);
      Vector y1(9), y2(9);
      sys.op->mult(x, y1);
      a.mult_true(x, y2);
      for (int i = 0; i < 9; i++) {
         CHECK(y1[i] == y2[i]);
      }
   }

   SUBCASE("all dofs essential pins the solution")
   {
      std::vector<int> all(9);
      for (int i = 0; i < 9; i++) {
         all[i] = i;
      }
      const Vector v = random_vector(9, 37);
      const LinearSystem sys = form_linear_system(a, b, all, v);
      Vector y(9);
      sys.op->mult(v, y);
      for (int i = 0; i < 9; i++) {
         CHECK(sys.rhs[i] == v[i]);
         CHECK(y[i] == doctest::Approx(v[i]).epsilon(1e-14));
      }
   }

   SUBCASE("validation")
   {
      CHECK_THROWS_AS(form_linear_system(a, b, {3, 1}, Vector(9)),
                      std::invalid_argument);
      CHECK_THROWS_AS(form_linear_system(a, b, {1, 1}, Vector(9)),
                      std::invalid_argument);
      CHECK_THROWS_AS(form_linear_system(a, b, {0, 9}, Vector(9)),
                      std::invalid_argument);
      CHECK_THROWS_AS(form_linear_system(a, b, {0}, Vector(5)),
                      std::invalid_argument);
   }
}

TEST_CASE("forms: full and constrained-operator elimination agree")
{
   const FeSpace space(mixed_forest(), {FeFamily::H1, 2});
   BilinearForm full(space, AssemblyMode::Full);
   full.add_diffusion(varying);
   full.assemble();
   BilinearForm partial(space, AssemblyMode::Partial);
   partial.add_diffusion(varying);
   partial.assemble();
   const LinearForm b(space, [](Vec2 p) { return std::sin(3.0 * p.x); });
   const std::vector<int> ess = space.essential_true_dofs({1, 2, 3, 4});
   Vector values(space.n_true_dofs());
   for (int e : ess) {
      values[e] = 0.25 * e;
   }
   const LinearSystem sf = form_linear_system(full, b, ess, values);
   const LinearSystem sp = form_linear_system(partial, b, ess, values);
   for (int i = 0; i < space.n_true_dofs(); i++) {
      CHECK(sf.rhs[i] == doctest::Approx(sp.rhs[i]).epsilon(1e-12));
      CHECK(sf.x0[i] == sp.x0[i]);
   }
   for (int trial = 0; trial < 3; trial++) {
      const Vector x = random_vector(space.n_true_dofs(), 80 + trial);
      Vector yf(space.n_true_dofs()), yp(space.n_true_dofs());
      sf.op->mult(x, yf);
      sp.op->mult(x, yp);
      double diff = 0.0, scale = 0.0;
      for (int i = 0; i < yf.size(); i++) {
         diff = std::max(diff, std::abs(yf[i] - yp[i]));
         scale = std::max(scale, std::abs(yf[i]));
      }
      CHECK(diff <= 1e-12 * scale);
   }
}

TEST_CASE("forms: polynomial solutions are reproduced on nc meshes")
{
   // Hanging chain of depth 2 via the indirectly constrained fixture.
   NcForest forest(make_cartesian(2, 1));
   forest.refine({{0, SplitKind::Iso}});
   forest.refine({{2, SplitKind::Iso}});

   for (int p : {1, 2, 3}) {
      const auto exact = [p](Vec2 v) {
         return std::pow(v.x, p) + std::pow(v.y, p) + v.x * v.y;
      };
      const auto load = [p](Vec2 v) {
         if (p < 2) {
            return 0.0;
         }
         return -static_cast<double>(p * (p - 1)) *
                (std::pow(v.x, p - 2) + std::pow(v.y, p - 2));
      };
      for (AssemblyMode mode : {AssemblyMode::Full, AssemblyMode::Partial}) {
         const FeSpace space(forest, {FeFamily::H1, p});
         BilinearForm a(space, mode);
         a.add_diffusion(one);
         a.assemble();
         const LinearForm b(space, load);
         const std::vector<int> ess = space.essential_true_dofs({1, 2, 3, 4});
         const GridFunction interp = project_coefficient(space, exact);
         const Vector values = space.local_to_true(interp.values());
         const LinearSystem sys = form_linear_system(a, b, ess, values);
         Vector diag = a.diagonal_true();
         for (int e : ess) {
            diag[e] = 1.0;
         }
         const CgResult res =
            cg_solve(*sys.op, sys.rhs, 1e-14, 500, &diag);
         REQUIRE(res.converged);
         const GridFunction u = recover_fem_solution(space, res.x);
         double err = 0.0;
         for (int d = 0; d < space.n_dofs(); d++) {
            err = std::max(err,
                           std::abs(u.values()[d] - interp.values()[d]));
         }
         CHECK(err <= 1e-10);
      }
   }
}

TEST_CASE("forms: recovered solutions reproduce linear fields")
{
   const FeSpace conf(make_cartesian(2, 2), {FeFamily::H1, 2});
   const Vector x = random_vector(conf.n_true_dofs(), 91);
   const GridFunction g = recover_fem_solution(conf, x);
   for (int i = 0; i < x.size(); i++) {
      CHECK(g.values()[i] == x[i]);
   }

   const FeSpace nc(mixed_forest(), {FeFamily::H1, 2});
   const auto plane = [](Vec2 p) { return p.x + p.y; };
   const GridFunction interp = project_coefficient(nc, plane);
   const GridFunction rec =
      recover_fem_solution(nc, nc.local_to_true(interp.values()));
   for (int d = 0; d < nc.n_dofs(); d++) {
      CHECK(rec.values()[d] ==
            doctest::Approx(interp.values()[d]).epsilon(1e-13));
   }
}

TEST_CASE("forms: lifecycle and coefficient validation")
{
   const FeSpace space(make_cartesian(2, 2), {FeFamily::H1, 1});
   BilinearForm a(space, AssemblyMode::Partial);
   const Vector x(space.n_true_dofs());
   Vector y(space.n_true_dofs());
   CHECK_THROWS_AS(a.mult_true(x, y), std::logic_error);
   a.add_diffusion(one);
   CHECK_THROWS_AS(a.assemble(0), std::invalid_argument);
   a.assemble();
   CHECK_THROWS_AS(a.assemble(), std::logic_error);
   CHECK_THROWS_AS(a.add_mass(one), std::logic_error);
   CHECK_THROWS_AS(a.matrix(), std::logic_error);
   CHECK_THROWS_AS(a.local_matrix(), std::logic_error);

   CHECK_THROWS_AS(pa_setup(space, IntegratorKind::Diffusion,
                            [](Vec2) { return 0.0; }),
                   std::invalid_argument);
   CHECK_THROWS_AS(pa_setup(space, IntegratorKind::Mass,
                            [](Vec2 p) { return p.x - 0.5; }),
                   std::invalid_argument);
}
