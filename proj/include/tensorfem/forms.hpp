// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_FORMS_HPP
#define TENSORFEM_FORMS_HPP

#include "tensorfem/fespace.hpp"
#include "tensorfem/solvers.hpp"
#include "tensorfem/tensor_kernels.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace tensorfem {

enum class IntegratorKind { Diffusion, Mass };
enum class AssemblyMode { Full, Partial };

/// Scalar coefficient evaluated at physical points.
using Coefficient = std::function<double(Vec2)>;

/// Quadrature-point factors of one integrator, the D block of the operator
/// decomposition A = Pt Gt Bt D B G P.  Mass stores one real per point,
/// diffusion three (the symmetric 2x2 map of reference gradients); nothing
/// element-matrix-like is kept, so storage grows with the quadrature grid
/// rather than the fourth power of the basis size.
class PaData {
public:
   IntegratorKind kind() const { return kind_; }
   int order() const { return order_; }
   int n_elements() const { return n_elements_; }
   /// Points per axis (order + 2).
   int quad_1d() const { return nq_; }
   const DenseMatrix &b1d() const { return em_.B1d; }
   const DenseMatrix &g1d() const { return em_.G1d; }

   /// Point factors of one element, nq^2 entries (mass) or 3 nq^2 entries
   /// (diffusion, per point D00 D01 D11), x-fastest point order.
   std::span<const double> d(int element) const;

   std::int64_t stored_reals() const
   {
      return static_cast<std::int64_t>(d_.size());
   }

private:
   friend PaData pa_setup(const FeSpace &, IntegratorKind,
                          const Coefficient &);

   IntegratorKind kind_ = IntegratorKind::Diffusion;
   int order_ = 1;
   int n_elements_ = 0;
   int nq_ = 0;
   EvalMatrices em_;
   std::vector<double> d_;
};

/// Evaluates the geometry and coefficient at the order+2 Gauss point lattice
/// of every element.  Throws the inverted-element error if det J <= 0 at any
/// point, and rejects non-positive coefficient values.
PaData pa_setup(const FeSpace &space, IntegratorKind kind,
                const Coefficient &coeff);

/// y += Gt Bt D B G x for local (L-level) vectors, all elements, realized by
/// 1D contractions per element.  threads > 1 splits the element loop; the
/// scatter stage runs in element order regardless, so results do not depend
/// on the thread count.
void pa_apply_local(const PaData &pa, const FeSpace &space, const Vector &x,
                    Vector &y, int threads = 1);

/// y = Pt Gt Bt D B G P x between true-DOF vectors.
Vector pa_apply(const PaData &pa, const FeSpace &space, const Vector &x);

/// Exact diagonal of Pt Gt Bt D B G P.  Elements whose DOFs are all
/// unconstrained contribute their local diagonal directly; elements touching
/// constrained DOFs fall back to the full local pair loop restricted to
/// diagonal couplings of P.
Vector pa_diagonal(const PaData &pa, const FeSpace &space);

/// Dense local matrix of one element by direct quadrature at the order+2
/// Gauss lattice (no factorization); the reference operator for assembly
/// and for storage/complexity audits.
DenseMatrix local_element_matrix(const FeSpace &space, IntegratorKind kind,
                                 const Coefficient &coeff, int element);

/// Dual L-vector b_i = sum_q alpha_q det J f(x_q) phi_i(xh_q).
class LinearForm {
public:
   LinearForm(const FeSpace &space, const Coefficient &f);

   const FeSpace &space() const { return *space_; }
   const Vector &values() const { return b_; }

private:
   const FeSpace *space_;
   Vector b_;
};

/// Sum of diffusion/mass integrators on one space, assembled either into a
/// global sparse matrix (Full) or into quadrature-point factors applied
/// matrix-free (Partial).  Both modes act on true-DOF vectors and present
/// the same operator up to roundoff.
class BilinearForm {
public:
   BilinearForm(const FeSpace &space, AssemblyMode mode);

   void add_diffusion(Coefficient kappa);
   void add_mass(Coefficient rho);

   /// Runs the element loop: local matrices scattered into Pt A P (Full) or
   /// point-factor setup (Partial).  threads parallelizes over elements;
   /// results are independent of the thread count (ordered merge).
   void assemble(int threads = 1);

   const FeSpace &space() const { return *space_; }
   AssemblyMode mode() const { return mode_; }
   bool assembled() const { return assembled_; }
   int true_size() const { return space_->n_true_dofs(); }

   /// y = A x on true-DOF vectors.
   void mult_true(const Vector &x, Vector &y) const;
   /// diag(A) on true DOFs, exact in both modes.
   Vector diagonal_true() const;

   /// Full mode: the true-DOF matrix Pt A P and the unconstrained (L-level)
   /// assembled matrix.
   const SparseMatrix &matrix() const;
   const SparseMatrix &local_matrix() const;
   const std::vector<PaData> &pa_data() const { return pa_; }

   /// Point-factor reals held in Partial mode (0 in Full mode).
   std::int64_t stored_reals() const;
   /// Local element-matrix reals computed during Full assembly, (p+1)^4 per
   /// element and integrator (0 in Partial mode).
   std::int64_t local_matrix_reals() const { return local_matrix_reals_; }
   std::int64_t global_matrix_nnz() const;

private:
   struct Integrator {
      IntegratorKind kind;
      Coefficient coeff;
   };

   const FeSpace *space_;
   AssemblyMode mode_;
   std::vector<Integrator> integrators_;
   bool assembled_ = false;
   SparseMatrix local_a_;
   SparseMatrix a_;
   std::vector<PaData> pa_;
   std::int64_t local_matrix_reals_ = 0;
   int threads_ = 1;

   void require_assembled() const;
};

/// Constrained true-DOF system ready for the solver: op is the essential-
/// eliminated operator (identity on essential DOFs), rhs the matching right
/// hand side, x0 the initial guess holding the essential values.  In Full
/// mode matrix holds the eliminated sparse matrix op wraps; op references
/// the bilinear form in Partial mode, so the form must outlive the system.
struct LinearSystem {
   std::unique_ptr<LinearOperator> op;
   std::shared_ptr<const SparseMatrix> matrix;
   Vector rhs;
   Vector x0;
};

/// B = Pt b with symmetric essential elimination: B[i] -= A[i][e] value[e]
/// off the essential set, B[e] = value[e] on it, and the operator acts as
/// the identity on essential DOFs.  essential must be sorted and unique;
/// values is a true-DOF vector read only at essential entries.
LinearSystem form_linear_system(const BilinearForm &a, const LinearForm &b,
                                const std::vector<int> &essential,
                                const Vector &values);

/// GridFunction with values P X from a true-DOF solution.
GridFunction recover_fem_solution(const FeSpace &space, const Vector &x);

} // namespace tensorfem

#endif
