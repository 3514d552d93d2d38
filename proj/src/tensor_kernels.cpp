// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/tensor_kernels.hpp"

#include <stdexcept>

namespace tensorfem {

namespace {
thread_local std::uint64_t multiplies = 0;
}

std::uint64_t multiply_count() { return multiplies; }
void reset_multiply_count() { multiplies = 0; }
void count_multiplies(std::uint64_t n) { multiplies += n; }

DenseMatrix mat_mult(const DenseMatrix &a, const DenseMatrix &b)
{
   if (a.cols() != b.rows()) {
      throw std::invalid_argument("mat_mult: dimension mismatch");
   }
   DenseMatrix c(a.rows(), b.cols());
   for (int i = 0; i < a.rows(); i++) {
      for (int k = 0; k < a.cols(); k++) {
         const double aik = a(i, k);
         for (int j = 0; j < b.cols(); j++) { c(i, j) += aik * b(k, j); }
      }
   }
   multiplies += static_cast<std::uint64_t>(a.rows()) * a.cols() * b.cols();
   return c;
}

DenseMatrix mat_mult_nt(const DenseMatrix &a, const DenseMatrix &b)
{
   if (a.cols() != b.cols()) {
      throw std::invalid_argument("mat_mult_nt: dimension mismatch");
   }
   DenseMatrix c(a.rows(), b.rows());
   for (int i = 0; i < a.rows(); i++) {
      for (int j = 0; j < b.rows(); j++) {
         double s = 0.0;
         for (int k = 0; k < a.cols(); k++) { s += a(i, k) * b(j, k); }
         c(i, j) = s;
      }
   }
   multiplies += static_cast<std::uint64_t>(a.rows()) * a.cols() * b.rows();
   return c;
}

DenseMatrix mat_mult_tn(const DenseMatrix &a, const DenseMatrix &b)
{
   if (a.rows() != b.rows()) {
      throw std::invalid_argument("mat_mult_tn: dimension mismatch");
   }
   DenseMatrix c(a.cols(), b.cols());
   for (int k = 0; k < a.rows(); k++) {
      for (int i = 0; i < a.cols(); i++) {
         const double aki = a(k, i);
         for (int j = 0; j < b.cols(); j++) { c(i, j) += aki * b(k, j); }
      }
   }
   multiplies += static_cast<std::uint64_t>(a.cols()) * a.rows() * b.cols();
   return c;
}

DenseMatrix tensor_interp_2d(const DenseMatrix &b1d, const DenseMatrix &v)
{
   if (v.rows() != b1d.cols() || v.cols() != b1d.cols()) {
      throw std::invalid_argument("tensor_interp_2d: nodal grid does not "
                                  "match the basis size");
   }
   return mat_mult_nt(mat_mult(b1d, v), b1d);
}

std::pair<DenseMatrix, DenseMatrix> tensor_grad_2d(const DenseMatrix &b1d,
                                                   const DenseMatrix &g1d,
                                                   const DenseMatrix &v)
{
   if (v.rows() != b1d.cols() || v.cols() != b1d.cols() ||
       g1d.rows() != b1d.rows() || g1d.cols() != b1d.cols()) {
      throw std::invalid_argument("tensor_grad_2d: dimension mismatch");
   }
   DenseMatrix dx = mat_mult_nt(mat_mult(g1d, v), b1d);
   DenseMatrix dy = mat_mult_nt(mat_mult(b1d, v), g1d);
   return {std::move(dx), std::move(dy)};
}

DenseMatrix tensor_interp_2d_transpose(const DenseMatrix &b1d,
                                       const DenseMatrix &q)
{
   if (q.rows() != b1d.rows() || q.cols() != b1d.rows()) {
      throw std::invalid_argument("tensor_interp_2d_transpose: quadrature "
                                  "grid does not match the rule size");
   }
   return mat_mult(mat_mult_tn(b1d, q), b1d);
}

DenseMatrix tensor_grad_2d_transpose(const DenseMatrix &b1d,
                                     const DenseMatrix &g1d,
                                     const DenseMatrix &qx,
                                     const DenseMatrix &qy)
{
   DenseMatrix vx = mat_mult(mat_mult_tn(g1d, qx), b1d);
   DenseMatrix vy = mat_mult(mat_mult_tn(b1d, qy), g1d);
   for (int i = 0; i < vx.rows(); i++) {
      for (int j = 0; j < vx.cols(); j++) { vx(i, j) += vy(i, j); }
   }
   return vx;
}

} // namespace tensorfem
