// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_SOLVERS_HPP
#define TENSORFEM_SOLVERS_HPP

#include "tensorfem/sparse.hpp"
#include "tensorfem/vector.hpp"

#include <functional>

namespace tensorfem {

/// Square operator interface shared by assembled matrices and matrix-free
/// operator applications.
class LinearOperator {
public:
   virtual ~LinearOperator() = default;
   virtual int rows() const = 0;
   virtual int cols() const = 0;
   /// y = A x
   virtual void mult(const Vector &x, Vector &y) const = 0;
};

/// LinearOperator view of a sparse matrix (not owning).
class SparseOperator : public LinearOperator {
public:
   explicit SparseOperator(const SparseMatrix &a) : a_(&a) {}
   int rows() const override { return a_->rows(); }
   int cols() const override { return a_->cols(); }
   void mult(const Vector &x, Vector &y) const override { a_->mult(x, y); }

private:
   const SparseMatrix *a_;
};

struct CgResult {
   Vector x;
   int iterations = 0;
   bool converged = false;
};

/// Preconditioned conjugate gradients with a zero initial guess.
///
/// Stops when the unpreconditioned residual satisfies
/// ||b - A x|| <= rel_tol * ||b||.  jacobi_diag, when given, must hold
/// strictly positive entries; it is applied as the inverse-diagonal
/// preconditioner.  If max_iters is exhausted the result carries the iterate
/// with the smallest residual norm seen and converged = false.  A NaN in the
/// recurrence raises a breakdown error.
CgResult cg_solve(const LinearOperator &a, const Vector &b, double rel_tol,
                  int max_iters, const Vector *jacobi_diag = nullptr,
                  const std::function<void(int, const Vector &)> &on_iterate =
                     nullptr);

} // namespace tensorfem

#endif
