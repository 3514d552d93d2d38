// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_TENSOR_KERNELS_HPP
#define TENSORFEM_TENSOR_KERNELS_HPP

#include "tensorfem/dense.hpp"

#include <cstdint>
#include <utility>

namespace tensorfem {

// All contractions below go through an instrumented multiply counter, so the
// storage/complexity audits can compare the factored kernels against a dense
// operator application on equal terms.

/// Total floating-point multiplies issued by the counted kernels since the
/// last reset.  Thread-local.
std::uint64_t multiply_count();
void reset_multiply_count();

/// Adds to the thread-local multiply counter; for code that performs counted
/// work outside the kernels in this header (pointwise quadrature scalings,
/// dense reference paths in tests).
void count_multiplies(std::uint64_t n);

/// C = A * B, counted.
DenseMatrix mat_mult(const DenseMatrix &a, const DenseMatrix &b);
/// C = A * B^t, counted.
DenseMatrix mat_mult_nt(const DenseMatrix &a, const DenseMatrix &b);
/// C = A^t * B, counted.
DenseMatrix mat_mult_tn(const DenseMatrix &a, const DenseMatrix &b);

/// Values of the 2D tensor-product field at the quadrature lattice:
/// out(k1,k2) = sum_{i1,i2} B1d(k1,i1) B1d(k2,i2) V(i1,i2), i.e. B V B^t.
/// V is indexed (x node, y node); one axis is contracted at a time, so the
/// cost is O(nq (p+1) (nq + p+1)) instead of the dense O(nq^2 (p+1)^2).
DenseMatrix tensor_interp_2d(const DenseMatrix &b1d, const DenseMatrix &v);

/// Reference-space gradient at the quadrature lattice:
/// {G V B^t, B V G^t} = {d/dx, d/dy} in reference coordinates.
std::pair<DenseMatrix, DenseMatrix> tensor_grad_2d(const DenseMatrix &b1d,
                                                   const DenseMatrix &g1d,
                                                   const DenseMatrix &v);

/// Adjoint of tensor_interp_2d: B^t Q B for quadrature-lattice data Q.
DenseMatrix tensor_interp_2d_transpose(const DenseMatrix &b1d,
                                       const DenseMatrix &q);

/// Adjoint of tensor_grad_2d: G^t Qx B + B^t Qy G.
DenseMatrix tensor_grad_2d_transpose(const DenseMatrix &b1d,
                                     const DenseMatrix &g1d,
                                     const DenseMatrix &qx,
                                     const DenseMatrix &qy);

} // namespace tensorfem

#endif
