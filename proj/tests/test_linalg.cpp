// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/solvers.hpp"

#include <cmath>
#include <doctest.h>
#include <stdexcept>
#include <random>
#include <vector>

using namespace tensorfem;

namespace {

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const SparseMatrix &a)
{
   Dense d(a.rows(), std::vector<double>(a.cols(), 0.0));
   for (int i = 0; i < a.rows(); i++) {
      auto cols = a.row_cols(i);
      auto vals = a.row_vals(i);
      for (size_t k = 0; k < cols.size(); k++) { d[i][cols[k]] = vals[k]; }
   }
   return d;
}

// Reference oracle: unpivoted Gaussian elimination on a copy (fine for the
// well-conditioned SPD fixtures used here).
Vector dense_solve(Dense a, Vector b)
{
   const int n = b.size();
   for (int k = 0; k < n; k++) {
      for (int i = k + 1; i < n; i++) {
         const double f = a[i][k] / a[k][k];
         for (int j = k; j < n; j++) { a[i][j] -= f * a[k][j]; }
         b[i] -= f * b[k];
      }
   }
   Vector x(n);
   for (int i = n - 1; i >= 0; i--) {
      double s = b[i];
      for (int j = i + 1; j < n; j++) { s -= a[i][j] * x[j]; }
      x[i] = s / a[i][i];
   }
   return x;
}

SparseMatrix random_spd(int n, std::mt19937 &gen)
{
   std::uniform_real_distribution<double> unit(-1.0, 1.0);
   Dense m(n, std::vector<double>(n, 0.0));
   for (int i = 0; i < n; i++) {
      for (int j = 0; j < n; j++) { m[i][j] = unit(gen); }
   }
   SparseMatrix::Builder b(n, n);
   for (int i = 0; i < n; i++) {
      for (int j = 0; j < n; j++) {
         double s = (i == j) ? n : 0.0; // diagonal dominance
         for (int k = 0; k < n; k++) { s += m[k][i] * m[k][j]; }
         b.add(i, j, s);
      }
   }
   return b.build();
}

} // namespace

TEST_CASE("vector operations")
{
   Vector a(3), b(3);
   a[0] = 1.0; a[1] = 2.0; a[2] = -2.0;
   b[0] = 0.5; b[1] = 0.0; b[2] = 1.0;
   CHECK(a.dot(b) == doctest::Approx(-1.5));
   CHECK(a.norm2() == doctest::Approx(3.0));
   CHECK(a.norm_inf() == doctest::Approx(2.0));
   a.axpy(2.0, b);
   CHECK(a[0] == doctest::Approx(2.0));
   CHECK(a[2] == doctest::Approx(0.0));
   CHECK(a.is_finite());
   a[1] = std::nan("");
   CHECK(!a.is_finite());
   CHECK_THROWS_AS(a.axpy(1.0, Vector(2)), std::invalid_argument);
}

TEST_CASE("builder accumulates duplicates and sorts columns")
{
   SparseMatrix::Builder b(2, 3);
   b.add(0, 2, 1.0);
   b.add(0, 0, 2.0);
   b.add(0, 2, 0.5);
   b.add(1, 1, -1.0);
   const SparseMatrix m = b.build();
   CHECK(m.nnz() == 3);
   auto cols = m.row_cols(0);
   REQUIRE(cols.size() == 2);
   CHECK(cols[0] == 0);
   CHECK(cols[1] == 2);
   CHECK(m(0, 2) == doctest::Approx(1.5));
   CHECK(m(0, 1) == 0.0);
   CHECK_THROWS_AS(b.add(2, 0, 1.0), std::invalid_argument);
}

TEST_CASE("spmv, transpose and multiply match dense references")
{
   std::mt19937 gen(7);
   std::uniform_real_distribution<double> unit(-1.0, 1.0);
   std::uniform_int_distribution<int> coin(0, 2);
   SparseMatrix::Builder ab(6, 5), bb(5, 7);
   for (int i = 0; i < 6; i++) {
      for (int j = 0; j < 5; j++) {
         if (coin(gen)) { ab.add(i, j, unit(gen)); }
      }
   }
   for (int i = 0; i < 5; i++) {
      for (int j = 0; j < 7; j++) {
         if (coin(gen)) { bb.add(i, j, unit(gen)); }
      }
   }
   const SparseMatrix a = ab.build(), b = bb.build();
   const Dense da = to_dense(a), db = to_dense(b);

   Vector x(5);
   for (int i = 0; i < 5; i++) { x[i] = unit(gen); }
   const Vector y = spmv(a, x);
   for (int i = 0; i < 6; i++) {
      double s = 0.0;
      for (int j = 0; j < 5; j++) { s += da[i][j] * x[j]; }
      CHECK(y[i] == doctest::Approx(s).scale(1.0).epsilon(1e-14));
   }

   Vector yt(5);
   Vector x6(6);
   for (int i = 0; i < 6; i++) { x6[i] = unit(gen); }
   a.mult_transpose(x6, yt);
   const SparseMatrix at = a.transpose();
   for (int j = 0; j < 5; j++) {
      double s = 0.0;
      for (int i = 0; i < 6; i++) { s += da[i][j] * x6[i]; }
      CHECK(yt[j] == doctest::Approx(s).scale(1.0).epsilon(1e-14));
      for (int i = 0; i < 6; i++) {
         CHECK(at(j, i) == da[i][j]);
      }
   }

   const SparseMatrix c = multiply(a, b);
   for (int i = 0; i < 6; i++) {
      for (int j = 0; j < 7; j++) {
         double s = 0.0;
         for (int k = 0; k < 5; k++) { s += da[i][k] * db[k][j]; }
         CHECK(c(i, j) == doctest::Approx(s).scale(1.0).epsilon(1e-14));
      }
   }
   CHECK_THROWS_AS(multiply(a, a), std::invalid_argument);
}

TEST_CASE("triple product equals the dense P^t A P")
{
   std::mt19937 gen(11);
   const SparseMatrix a = random_spd(8, gen);
   std::uniform_real_distribution<double> unit(-1.0, 1.0);
   SparseMatrix::Builder pb(8, 4);
   for (int i = 0; i < 8; i++) {
      pb.add(i, i % 4, unit(gen));
      if (i % 3 == 0) { pb.add(i, (i + 1) % 4, unit(gen)); }
   }
   const SparseMatrix p = pb.build();
   const SparseMatrix r = sparse_triple_product(p, a);
   const Dense da = to_dense(a), dp = to_dense(p);
   REQUIRE(r.rows() == 4);
   REQUIRE(r.cols() == 4);
   for (int i = 0; i < 4; i++) {
      for (int j = 0; j < 4; j++) {
         double s = 0.0;
         for (int k = 0; k < 8; k++) {
            for (int l = 0; l < 8; l++) { s += dp[k][i] * da[k][l] * dp[l][j]; }
         }
         CHECK(r(i, j) == doctest::Approx(s).scale(1.0).epsilon(1e-13));
         CHECK(r(i, j) == doctest::Approx(r(j, i)).scale(1.0).epsilon(1e-13));
      }
   }
   CHECK_THROWS_AS(sparse_triple_product(p, multiply(a, p)),
                   std::invalid_argument);
}

TEST_CASE("column-selector triple product extracts a submatrix")
{
   SparseMatrix::Builder ab(3, 3);
   for (int i = 0; i < 3; i++) {
      for (int j = 0; j < 3; j++) { ab.add(i, j, 10.0 * i + j); }
   }
   const SparseMatrix a = ab.build();
   SparseMatrix::Builder pb(3, 2);
   pb.add(2, 0, 1.0); // first selected column: index 2
   pb.add(0, 1, 1.0); // second: index 0
   const SparseMatrix r = sparse_triple_product(pb.build(), a);
   CHECK(r(0, 0) == 22.0);
   CHECK(r(0, 1) == 20.0);
   CHECK(r(1, 0) == 2.0);
   CHECK(r(1, 1) == 0.0);
   CHECK(r.nnz() == 4);
}

TEST_CASE("identity")
{
   const SparseMatrix i5 = SparseMatrix::identity(5);
   CHECK(i5.nnz() == 5);
   Vector x(5);
   x[3] = 2.5;
   CHECK(spmv(i5, x)[3] == 2.5);
}

TEST_CASE("cg converges on a diagonal system within n iterations")
{
   const int n = 30;
   SparseMatrix::Builder b(n, n);
   Vector rhs(n);
   for (int i = 0; i < n; i++) {
      b.add(i, i, 1.0 + i);
      rhs[i] = 1.0;
   }
   const SparseMatrix a = b.build();
   const SparseOperator op(a);
   const CgResult res = cg_solve(op, rhs, 1e-12, n);
   CHECK(res.converged);
   CHECK(res.iterations <= n);
   for (int i = 0; i < n; i++) {
      CHECK(res.x[i] == doctest::Approx(1.0 / (1.0 + i)).epsilon(1e-10));
   }
}

TEST_CASE("cg matches a direct solve and decreases the A-norm error")
{
   std::mt19937 gen(23);
   const int n = 24;
   const SparseMatrix a = random_spd(n, gen);
   const Dense da = to_dense(a);
   std::uniform_real_distribution<double> unit(-1.0, 1.0);
   Vector rhs(n);
   for (int i = 0; i < n; i++) { rhs[i] = unit(gen); }
   const Vector xref = dense_solve(da, rhs);

   std::vector<double> anorm_errors;
   const SparseOperator op(a);
   const CgResult res = cg_solve(
      op, rhs, 1e-13, 200, nullptr, [&](int, const Vector &x) {
         Vector e = xref;
         e.axpy(-1.0, x);
         anorm_errors.push_back(std::sqrt(spmv(a, e).dot(e)));
      });
   CHECK(res.converged);
   for (int i = 0; i < n; i++) {
      CHECK(res.x[i] == doctest::Approx(xref[i]).scale(1.0).epsilon(1e-10));
   }
   for (size_t i = 1; i < anorm_errors.size(); i++) {
      CHECK(anorm_errors[i] <= anorm_errors[i - 1] * (1.0 + 1e-12));
   }
}

TEST_CASE("jacobi preconditioning reduces iterations on a skewed spectrum")
{
   const int n = 400;
   SparseMatrix::Builder b(n, n);
   Vector rhs(n), diag(n);
   for (int i = 0; i < n; i++) {
      const double d = 1.0 + 99.0 * i / (n - 1);
      b.add(i, i, d);
      if (i > 0) { b.add(i, i - 1, -0.4); }
      if (i < n - 1) { b.add(i, i + 1, -0.4); }
      rhs[i] = 1.0;
   }
   const SparseMatrix a = b.build();
   for (int i = 0; i < n; i++) { diag[i] = a(i, i); }
   const SparseOperator op(a);
   const CgResult plain = cg_solve(op, rhs, 1e-12, 2000);
   const CgResult prec = cg_solve(op, rhs, 1e-12, 2000, &diag);
   CHECK(plain.converged);
   CHECK(prec.converged);
   CHECK(prec.iterations < plain.iterations);
}

TEST_CASE("cg reports non-convergence with the best iterate")
{
   const int n = 50;
   SparseMatrix::Builder b(n, n);
   Vector rhs(n);
   for (int i = 0; i < n; i++) {
      b.add(i, i, 2.0);
      if (i > 0) { b.add(i, i - 1, -1.0); }
      if (i < n - 1) { b.add(i, i + 1, -1.0); }
      rhs[i] = 1.0;
   }
   const SparseMatrix a = b.build();
   const SparseOperator op(a);
   // The 2-norm residual of CG on this problem rises before it falls; by
   // iteration 24 it is well below the initial one, convergence is at 25.
   const CgResult res = cg_solve(op, rhs, 1e-14, 24);
   CHECK(!res.converged);
   CHECK(res.iterations == 24);
   Vector r = rhs;
   r.axpy(-1.0, spmv(a, res.x));
   CHECK(r.norm2() < 0.5 * rhs.norm2());
}

TEST_CASE("cg rejects bad inputs and breaks down on NaN")
{
   SparseMatrix::Builder b(2, 2);
   b.add(0, 0, 1.0);
   b.add(1, 1, 1.0);
   const SparseMatrix a = b.build();
   const SparseOperator op(a);
   Vector rhs(2, 1.0);
   Vector bad_diag(2, 0.0);
   CHECK_THROWS_AS(cg_solve(op, rhs, 1e-12, 10, &bad_diag),
                   std::invalid_argument);
   CHECK_THROWS_AS(cg_solve(op, Vector(3), 1e-12, 10), std::invalid_argument);

   class NanOperator : public LinearOperator {
   public:
      int rows() const override { return 2; }
      int cols() const override { return 2; }
      void mult(const Vector &, Vector &y) const override
      {
         y[0] = std::nan("");
         y[1] = 0.0;
      }
   } nan_op;
   CHECK_THROWS_AS(cg_solve(nan_op, rhs, 1e-12, 10), std::runtime_error);
}
