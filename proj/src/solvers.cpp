// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace tensorfem {

CgResult cg_solve(const LinearOperator &a, const Vector &b, double rel_tol,
                  int max_iters, const Vector *jacobi_diag,
                  const std::function<void(int, const Vector &)> &on_iterate)
{
   const int n = b.size();
   if (a.rows() != n || a.cols() != n) {
      throw std::invalid_argument("cg_solve: operator/vector size mismatch");
   }
   if (jacobi_diag) {
      if (jacobi_diag->size() != n) {
         throw std::invalid_argument("cg_solve: preconditioner size mismatch");
      }
      for (int i = 0; i < n; i++) {
         if (!((*jacobi_diag)[i] > 0.0)) {
            throw std::invalid_argument(
               "cg_solve: Jacobi diagonal must be strictly positive");
         }
      }
   }

   CgResult res;
   res.x = Vector(n);
   const double bnorm = b.norm2();
   if (!std::isfinite(bnorm)) {
      throw std::runtime_error("cg_solve: right-hand side is not finite");
   }
   const double target = rel_tol * bnorm;
   if (bnorm == 0.0) {
      res.converged = true;
      return res;
   }

   Vector r = b; // r = b - A*0
   Vector z(n), q(n);
   auto precondition = [&](const Vector &in, Vector &out) {
      if (jacobi_diag) {
         for (int i = 0; i < n; i++) { out[i] = in[i] / (*jacobi_diag)[i]; }
      }
      else {
         out = in;
      }
   };
   precondition(r, z);
   Vector p = z;
   double rz = r.dot(z);
   double rnorm = r.norm2();
   Vector best = res.x;
   double best_rnorm = rnorm;

   for (int it = 1; it <= max_iters; it++) {
      if (rnorm <= target) {
         res.converged = true;
         res.iterations = it - 1;
         return res;
      }
      a.mult(p, q);
      const double pq = p.dot(q);
      const double alpha = rz / pq;
      if (!std::isfinite(alpha)) {
         throw std::runtime_error("cg_solve: breakdown (non-finite step)");
      }
      res.x.axpy(alpha, p);
      r.axpy(-alpha, q);
      rnorm = r.norm2();
      if (!std::isfinite(rnorm)) {
         throw std::runtime_error("cg_solve: breakdown (non-finite residual)");
      }
      if (rnorm < best_rnorm) {
         best_rnorm = rnorm;
         best = res.x;
      }
      if (on_iterate) { on_iterate(it, res.x); }
      precondition(r, z);
      const double rz_next = r.dot(z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (int i = 0; i < n; i++) { p[i] = z[i] + beta * p[i]; }
   }
   res.iterations = max_iters;
   if (rnorm <= target) {
      res.converged = true;
   }
   else {
      res.x = best;
   }
   return res;
}

} // namespace tensorfem
