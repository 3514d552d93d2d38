// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/forms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace tensorfem {

namespace {

// Dense tabulation of the 2D tensor basis at the quadrature lattice: rows
// are points, columns local DOFs, both x-fastest.  Used by the reference
// (unfactored) quadrature loops.
struct QuadTables {
   DenseMatrix b, gx, gy;
};

QuadTables tabulate(const EvalMatrices &em)
{
   const int nq = em.B1d.rows();
   const int nd = em.B1d.cols();
   QuadTables t{DenseMatrix(nq * nq, nd * nd), DenseMatrix(nq * nq, nd * nd),
                DenseMatrix(nq * nq, nd * nd)};
   for (int qy = 0; qy < nq; qy++) {
      for (int qx = 0; qx < nq; qx++) {
         const int q = qy * nq + qx;
         for (int b = 0; b < nd; b++) {
            for (int a = 0; a < nd; a++) {
               const int i = b * nd + a;
               t.b(q, i) = em.B1d(qx, a) * em.B1d(qy, b);
               t.gx(q, i) = em.G1d(qx, a) * em.B1d(qy, b);
               t.gy(q, i) = em.B1d(qx, a) * em.G1d(qy, b);
            }
         }
      }
   }
   return t;
}

// Weighted coefficient factors at one quadrature point: the mass weight or
// the symmetric 2x2 reference-gradient map (D00, D01, D11) of diffusion.
void point_factors(IntegratorKind kind, const Coefficient &coeff,
                   const ElementTransformation &tr, double xq, double yq,
                   double wq, double *out)
{
   const ElementTransformation::Jacobian j = tr.jacobian(xq, yq);
   const double det = j.det();
   if (det <= 0.0) {
      throw std::runtime_error(
         "forms: inverted element at a quadrature point");
   }
   const double c = coeff(tr.point(xq, yq));
   if (!(c > 0.0)) {
      throw std::invalid_argument("forms: coefficient must be positive");
   }
   if (kind == IntegratorKind::Mass) {
      out[0] = wq * det * c;
      return;
   }
   const double s = wq * c / det;
   out[0] = s * (j.dxdy * j.dxdy + j.dydy * j.dydy);
   out[1] = -s * (j.dxdy * j.dxdx + j.dydy * j.dydx);
   out[2] = s * (j.dxdx * j.dxdx + j.dydx * j.dydx);
}

DenseMatrix local_matrix_tabulated(const QuadTables &t,
                                   const QuadratureRule1D &rule,
                                   const ElementTransformation &tr,
                                   IntegratorKind kind,
                                   const Coefficient &coeff)
{
   const int nq = rule.size();
   const int nd2 = t.b.cols();
   DenseMatrix loc(nd2, nd2);
   double f[3];
   for (int qy = 0; qy < nq; qy++) {
      for (int qx = 0; qx < nq; qx++) {
         point_factors(kind, coeff, tr, rule.points[qx], rule.points[qy],
                       rule.weights[qx] * rule.weights[qy], f);
         const int q = qy * nq + qx;
         if (kind == IntegratorKind::Mass) {
            for (int i = 0; i < nd2; i++) {
               const double bi = f[0] * t.b(q, i);
               for (int j = 0; j < nd2; j++) {
                  loc(i, j) += bi * t.b(q, j);
               }
            }
         } else {
            for (int i = 0; i < nd2; i++) {
               const double ax = f[0] * t.gx(q, i) + f[1] * t.gy(q, i);
               const double ay = f[1] * t.gx(q, i) + f[2] * t.gy(q, i);
               for (int j = 0; j < nd2; j++) {
                  loc(i, j) += ax * t.gx(q, j) + ay * t.gy(q, j);
               }
            }
         }
      }
   }
   return loc;
}

// Chunked element loop; worker exceptions are rethrown on the caller.
void run_element_chunks(int n, int threads,
                        const std::function<void(int, int)> &work)
{
   if (threads <= 1 || n <= 1) {
      work(0, n);
      return;
   }
   const int nt = std::min(threads, n);
   const int chunk = (n + nt - 1) / nt;
   std::vector<std::thread> pool;
   std::vector<std::exception_ptr> errors(nt);
   for (int t = 0; t < nt; t++) {
      const int lo = t * chunk;
      const int hi = std::min(n, lo + chunk);
      pool.emplace_back([&work, &errors, t, lo, hi]() {
         try {
            work(lo, hi);
         } catch (...) {
            errors[t] = std::current_exception();
         }
      });
   }
   for (std::thread &th : pool) {
      th.join();
   }
   for (const std::exception_ptr &e : errors) {
      if (e) {
         std::rethrow_exception(e);
      }
   }
}

void check_space_match(const PaData &pa, const FeSpace &space)
{
   if (pa.order() != space.collection().order() ||
       pa.n_elements() != space.mesh().n_elements()) {
      throw std::invalid_argument("forms: point factors were built for a "
                                  "different space");
   }
}

class OwningSparseOperator : public LinearOperator {
public:
   explicit OwningSparseOperator(std::shared_ptr<const SparseMatrix> a)
      : a_(std::move(a))
   {
   }
   int rows() const override { return a_->rows(); }
   int cols() const override { return a_->cols(); }
   void mult(const Vector &x, Vector &y) const override { a_->mult(x, y); }

private:
   std::shared_ptr<const SparseMatrix> a_;
};

// Identity on the essential DOFs, the wrapped operator with essential
// couplings cut everywhere else; keeps symmetry without a matrix.
class ConstrainedOperator : public LinearOperator {
public:
   ConstrainedOperator(const BilinearForm &a, std::vector<int> essential)
      : a_(&a), essential_(std::move(essential)), z_(a.true_size()),
        w_(a.true_size())
   {
   }
   int rows() const override { return a_->true_size(); }
   int cols() const override { return a_->true_size(); }
   void mult(const Vector &x, Vector &y) const override
   {
      z_ = x;
      for (int e : essential_) {
         z_[e] = 0.0;
      }
      a_->mult_true(z_, w_);
      y = w_;
      for (int e : essential_) {
         y[e] = x[e];
      }
   }

private:
   const BilinearForm *a_;
   std::vector<int> essential_;
   mutable Vector z_, w_;
};

} // namespace

std::span<const double> PaData::d(int element) const
{
   const size_t per =
      static_cast<size_t>(nq_) * nq_ * (kind_ == IntegratorKind::Mass ? 1 : 3);
   return {d_.data() + per * element, per};
}

PaData pa_setup(const FeSpace &space, IntegratorKind kind,
                const Coefficient &coeff)
{
   if (!coeff) {
      throw std::invalid_argument("pa_setup: coefficient is empty");
   }
   PaData pa;
   pa.kind_ = kind;
   pa.order_ = space.collection().order();
   pa.n_elements_ = space.mesh().n_elements();
   const QuadratureRule1D rule = gauss_legendre(pa.order_ + 2);
   pa.nq_ = rule.size();
   pa.em_ = eval_matrices(space.basis(), rule);
   const int nc = kind == IntegratorKind::Mass ? 1 : 3;
   const int nq2 = pa.nq_ * pa.nq_;
   pa.d_.resize(static_cast<size_t>(pa.n_elements_) * nq2 * nc);
   for (int k = 0; k < pa.n_elements_; k++) {
      const ElementTransformation tr = space.mesh().transformation(k);
      double *out = &pa.d_[static_cast<size_t>(k) * nq2 * nc];
      for (int qy = 0; qy < pa.nq_; qy++) {
         for (int qx = 0; qx < pa.nq_; qx++) {
            point_factors(kind, coeff, tr, rule.points[qx], rule.points[qy],
                          rule.weights[qx] * rule.weights[qy],
                          out + (qy * pa.nq_ + qx) * nc);
         }
      }
   }
   return pa;
}

void pa_apply_local(const PaData &pa, const FeSpace &space, const Vector &x,
                    Vector &y, int threads)
{
   check_space_match(pa, space);
   if (x.size() != space.n_dofs() || y.size() != space.n_dofs()) {
      throw std::invalid_argument("pa_apply_local: size mismatch");
   }
   const int nd = pa.order() + 1;
   const int nd2 = nd * nd;
   const int nq = pa.quad_1d();
   const int n_el = pa.n_elements();
   const bool mass = pa.kind() == IntegratorKind::Mass;

   // Element results land in a per-element buffer; the gather below runs in
   // element order, so output does not depend on the thread partition.
   std::vector<double> partial(static_cast<size_t>(n_el) * nd2);
   run_element_chunks(n_el, threads, [&](int lo, int hi) {
      DenseMatrix v(nd, nd);
      for (int k = lo; k < hi; k++) {
         const std::span<const int> dofs = space.element_dofs(k);
         for (int b = 0; b < nd; b++) {
            for (int a = 0; a < nd; a++) {
               v(a, b) = x[dofs[b * nd + a]];
            }
         }
         const std::span<const double> d = pa.d(k);
         DenseMatrix r;
         if (mass) {
            DenseMatrix q = tensor_interp_2d(pa.b1d(), v);
            for (int qy = 0; qy < nq; qy++) {
               for (int qx = 0; qx < nq; qx++) {
                  q(qx, qy) *= d[qy * nq + qx];
               }
            }
            count_multiplies(static_cast<std::uint64_t>(nq) * nq);
            r = tensor_interp_2d_transpose(pa.b1d(), q);
         } else {
            auto [qx_v, qy_v] = tensor_grad_2d(pa.b1d(), pa.g1d(), v);
            for (int qy = 0; qy < nq; qy++) {
               for (int qx = 0; qx < nq; qx++) {
                  const double *dq = &d[(qy * nq + qx) * 3];
                  const double gx = qx_v(qx, qy);
                  const double gy = qy_v(qx, qy);
                  qx_v(qx, qy) = dq[0] * gx + dq[1] * gy;
                  qy_v(qx, qy) = dq[1] * gx + dq[2] * gy;
               }
            }
            count_multiplies(4ull * nq * nq);
            r = tensor_grad_2d_transpose(pa.b1d(), pa.g1d(), qx_v, qy_v);
         }
         double *out = &partial[static_cast<size_t>(k) * nd2];
         for (int b = 0; b < nd; b++) {
            for (int a = 0; a < nd; a++) {
               out[b * nd + a] = r(a, b);
            }
         }
      }
   });
   for (int k = 0; k < n_el; k++) {
      const std::span<const int> dofs = space.element_dofs(k);
      const double *out = &partial[static_cast<size_t>(k) * nd2];
      for (int i = 0; i < nd2; i++) {
         y[dofs[i]] += out[i];
      }
   }
}

Vector pa_apply(const PaData &pa, const FeSpace &space, const Vector &x)
{
   if (x.size() != space.n_true_dofs()) {
      throw std::invalid_argument("pa_apply: size mismatch");
   }
   const Vector xl = space.true_to_local(x);
   Vector yl(space.n_dofs());
   pa_apply_local(pa, space, xl, yl);
   Vector y(space.n_true_dofs());
   space.prolongation().mult_transpose(yl, y);
   return y;
}

Vector pa_diagonal(const PaData &pa, const FeSpace &space)
{
   check_space_match(pa, space);
   const int nd = pa.order() + 1;
   const int nd2 = nd * nd;
   const int nq = pa.quad_1d();
   const int nq2 = nq * nq;
   const bool mass = pa.kind() == IntegratorKind::Mass;
   const QuadTables t = tabulate({pa.b1d(), pa.g1d()});
   const SparseMatrix &p = space.prolongation();

   Vector diag(space.n_true_dofs());
   for (int k = 0; k < pa.n_elements(); k++) {
      const std::span<const int> dofs = space.element_dofs(k);
      const std::span<const double> d = pa.d(k);
      bool constrained = false;
      for (int i = 0; i < nd2; i++) {
         if (space.true_index(dofs[i]) < 0) {
            constrained = true;
            break;
         }
      }
      if (!constrained) {
         for (int i = 0; i < nd2; i++) {
            double s = 0.0;
            for (int q = 0; q < nq2; q++) {
               if (mass) {
                  s += t.b(q, i) * t.b(q, i) * d[q];
               } else {
                  const double gx = t.gx(q, i);
                  const double gy = t.gy(q, i);
                  s += gx * gx * d[3 * q] + 2.0 * gx * gy * d[3 * q + 1] +
                       gy * gy * d[3 * q + 2];
               }
            }
            diag[space.true_index(dofs[i])] += s;
         }
         continue;
      }
      // Constrained DOFs spread one local entry over several true DOFs, so
      // off-diagonal local pairs can land on the diagonal; walk all pairs
      // and keep the couplings where both sides hit the same true DOF.
      for (int i = 0; i < nd2; i++) {
         const std::span<const int> ci = p.row_cols(dofs[i]);
         const std::span<const double> wi = p.row_vals(dofs[i]);
         for (int j = 0; j < nd2; j++) {
            double lij = 0.0;
            for (int q = 0; q < nq2; q++) {
               if (mass) {
                  lij += t.b(q, i) * t.b(q, j) * d[q];
               } else {
                  lij += t.gx(q, i) * t.gx(q, j) * d[3 * q] +
                         (t.gx(q, i) * t.gy(q, j) +
                          t.gy(q, i) * t.gx(q, j)) *
                            d[3 * q + 1] +
                         t.gy(q, i) * t.gy(q, j) * d[3 * q + 2];
               }
            }
            const std::span<const int> cj = p.row_cols(dofs[j]);
            const std::span<const double> wj = p.row_vals(dofs[j]);
            for (size_t a = 0; a < ci.size(); a++) {
               for (size_t b = 0; b < cj.size(); b++) {
                  if (ci[a] == cj[b]) {
                     diag[ci[a]] += wi[a] * wj[b] * lij;
                  }
               }
            }
         }
      }
   }
   return diag;
}

DenseMatrix local_element_matrix(const FeSpace &space, IntegratorKind kind,
                                 const Coefficient &coeff, int element)
{
   if (!coeff) {
      throw std::invalid_argument("local_element_matrix: coefficient is "
                                  "empty");
   }
   const QuadratureRule1D rule =
      gauss_legendre(space.collection().order() + 2);
   const EvalMatrices em = eval_matrices(space.basis(), rule);
   const QuadTables t = tabulate(em);
   return local_matrix_tabulated(t, rule,
                                 space.mesh().transformation(element), kind,
                                 coeff);
}

LinearForm::LinearForm(const FeSpace &space, const Coefficient &f)
   : space_(&space), b_(space.n_dofs())
{
   if (!f) {
      throw std::invalid_argument("LinearForm: load function is empty");
   }
   const int nd = space.collection().order() + 1;
   const QuadratureRule1D rule =
      gauss_legendre(space.collection().order() + 2);
   const int nq = rule.size();
   const EvalMatrices em = eval_matrices(space.basis(), rule);
   const Mesh &mesh = space.mesh();
   DenseMatrix q(nq, nq);
   for (int k = 0; k < mesh.n_elements(); k++) {
      const ElementTransformation tr = mesh.transformation(k);
      for (int qy = 0; qy < nq; qy++) {
         for (int qx = 0; qx < nq; qx++) {
            const double det =
               tr.jacobian(rule.points[qx], rule.points[qy]).det();
            q(qx, qy) = rule.weights[qx] * rule.weights[qy] * det *
                        f(tr.point(rule.points[qx], rule.points[qy]));
         }
      }
      const DenseMatrix bl = tensor_interp_2d_transpose(em.B1d, q);
      const std::span<const int> dofs = space.element_dofs(k);
      for (int b = 0; b < nd; b++) {
         for (int a = 0; a < nd; a++) {
            b_[dofs[b * nd + a]] += bl(a, b);
         }
      }
   }
}

BilinearForm::BilinearForm(const FeSpace &space, AssemblyMode mode)
   : space_(&space), mode_(mode)
{
}

void BilinearForm::add_diffusion(Coefficient kappa)
{
   if (assembled_) {
      throw std::logic_error("BilinearForm: already assembled");
   }
   if (!kappa) {
      throw std::invalid_argument("BilinearForm: coefficient is empty");
   }
   integrators_.push_back({IntegratorKind::Diffusion, std::move(kappa)});
}

void BilinearForm::add_mass(Coefficient rho)
{
   if (assembled_) {
      throw std::logic_error("BilinearForm: already assembled");
   }
   if (!rho) {
      throw std::invalid_argument("BilinearForm: coefficient is empty");
   }
   integrators_.push_back({IntegratorKind::Mass, std::move(rho)});
}

void BilinearForm::assemble(int threads)
{
   if (threads < 1) {
      throw std::invalid_argument("BilinearForm: threads must be >= 1");
   }
   if (assembled_) {
      throw std::logic_error("BilinearForm: already assembled");
   }
   threads_ = threads;
   if (mode_ == AssemblyMode::Partial) {
      for (const Integrator &integ : integrators_) {
         pa_.push_back(pa_setup(*space_, integ.kind, integ.coeff));
      }
      assembled_ = true;
      return;
   }

   const Mesh &mesh = space_->mesh();
   const int n_el = mesh.n_elements();
   const int nd2 = (space_->collection().order() + 1) *
                   (space_->collection().order() + 1);
   const QuadratureRule1D rule =
      gauss_legendre(space_->collection().order() + 2);
   const QuadTables tables = tabulate(eval_matrices(space_->basis(), rule));

   std::vector<DenseMatrix> locals(n_el);
   run_element_chunks(n_el, threads_, [&](int lo, int hi) {
      for (int k = lo; k < hi; k++) {
         const ElementTransformation tr = mesh.transformation(k);
         DenseMatrix sum(nd2, nd2);
         for (const Integrator &integ : integrators_) {
            const DenseMatrix one = local_matrix_tabulated(
               tables, rule, tr, integ.kind, integ.coeff);
            for (int i = 0; i < nd2; i++) {
               for (int j = 0; j < nd2; j++) {
                  sum(i, j) += one(i, j);
               }
            }
         }
         locals[k] = std::move(sum);
      }
   });
   local_matrix_reals_ = static_cast<std::int64_t>(n_el) *
                         static_cast<std::int64_t>(integrators_.size()) *
                         nd2 * nd2;

   SparseMatrix::Builder builder(space_->n_dofs(), space_->n_dofs());
   for (int k = 0; k < n_el; k++) {
      const std::span<const int> dofs = space_->element_dofs(k);
      for (int i = 0; i < nd2; i++) {
         for (int j = 0; j < nd2; j++) {
            builder.add(dofs[i], dofs[j], locals[k](i, j));
         }
      }
   }
   local_a_ = builder.build();
   a_ = sparse_triple_product(space_->prolongation(), local_a_);
   assembled_ = true;
}

void BilinearForm::require_assembled() const
{
   if (!assembled_) {
      throw std::logic_error("BilinearForm: assemble() has not been called");
   }
}

void BilinearForm::mult_true(const Vector &x, Vector &y) const
{
   require_assembled();
   if (x.size() != true_size() || y.size() != true_size()) {
      throw std::invalid_argument("BilinearForm::mult_true: size mismatch");
   }
   if (mode_ == AssemblyMode::Full) {
      a_.mult(x, y);
      return;
   }
   const Vector xl = space_->true_to_local(x);
   Vector yl(space_->n_dofs());
   for (const PaData &pa : pa_) {
      pa_apply_local(pa, *space_, xl, yl, threads_);
   }
   space_->prolongation().mult_transpose(yl, y);
}

Vector BilinearForm::diagonal_true() const
{
   require_assembled();
   if (mode_ == AssemblyMode::Full) {
      return a_.diagonal();
   }
   Vector d(true_size());
   for (const PaData &pa : pa_) {
      const Vector one = pa_diagonal(pa, *space_);
      d.axpy(1.0, one);
   }
   return d;
}

const SparseMatrix &BilinearForm::matrix() const
{
   require_assembled();
   if (mode_ != AssemblyMode::Full) {
      throw std::logic_error("BilinearForm: no matrix in partial mode");
   }
   return a_;
}

const SparseMatrix &BilinearForm::local_matrix() const
{
   require_assembled();
   if (mode_ != AssemblyMode::Full) {
      throw std::logic_error("BilinearForm: no matrix in partial mode");
   }
   return local_a_;
}

std::int64_t BilinearForm::stored_reals() const
{
   std::int64_t n = 0;
   for (const PaData &pa : pa_) {
      n += pa.stored_reals();
   }
   return n;
}

std::int64_t BilinearForm::global_matrix_nnz() const
{
   return mode_ == AssemblyMode::Full && assembled_ ? a_.nnz() : 0;
}

LinearSystem form_linear_system(const BilinearForm &a, const LinearForm &b,
                                const std::vector<int> &essential,
                                const Vector &values)
{
   if (!a.assembled()) {
      throw std::logic_error("form_linear_system: form is not assembled");
   }
   if (&a.space() != &b.space()) {
      throw std::invalid_argument("form_linear_system: forms live on "
                                  "different spaces");
   }
   const int n = a.true_size();
   if (values.size() != n) {
      throw std::invalid_argument("form_linear_system: boundary value size "
                                  "mismatch");
   }
   if (!std::is_sorted(essential.begin(), essential.end()) ||
       std::adjacent_find(essential.begin(), essential.end()) !=
          essential.end()) {
      throw std::invalid_argument("form_linear_system: essential list must "
                                  "be sorted and unique");
   }
   if (!essential.empty() &&
       (essential.front() < 0 || essential.back() >= n)) {
      throw std::invalid_argument("form_linear_system: essential DOF out of "
                                  "range");
   }

   LinearSystem sys;
   sys.rhs = Vector(n);
   a.space().prolongation().mult_transpose(b.values(), sys.rhs);
   sys.x0 = Vector(n);
   for (int e : essential) {
      sys.x0[e] = values[e];
   }
   if (!essential.empty()) {
      Vector ax(n);
      a.mult_true(sys.x0, ax);
      sys.rhs.axpy(-1.0, ax);
      for (int e : essential) {
         sys.rhs[e] = values[e];
      }
   }

   if (a.mode() == AssemblyMode::Partial) {
      sys.op = std::make_unique<ConstrainedOperator>(a, essential);
      return sys;
   }

   // Symmetric elimination on a copy: essential rows and columns become
   // identity, eliminated couplings stay as explicit zeros.
   std::vector<char> is_ess(n, 0);
   for (int e : essential) {
      is_ess[e] = 1;
   }
   const SparseMatrix &full = a.matrix();
   SparseMatrix::Builder builder(n, n);
   for (int i = 0; i < n; i++) {
      const std::span<const int> cols = full.row_cols(i);
      const std::span<const double> vals = full.row_vals(i);
      for (size_t c = 0; c < cols.size(); c++) {
         const int j = cols[c];
         builder.add(i, j, is_ess[i] || is_ess[j] ? 0.0 : vals[c]);
      }
   }
   for (int e : essential) {
      builder.add(e, e, 1.0);
   }
   auto eliminated = std::make_shared<SparseMatrix>(builder.build());
   sys.matrix = eliminated;
   sys.op = std::make_unique<OwningSparseOperator>(std::move(eliminated));
   return sys;
}

GridFunction recover_fem_solution(const FeSpace &space, const Vector &x)
{
   GridFunction g(space);
   g.set_from_true(x);
   return g;
}

} // namespace tensorfem
