// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_SPARSE_HPP
#define TENSORFEM_SPARSE_HPP

#include "tensorfem/vector.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace tensorfem {

/// Compressed sparse row matrix.  Column indices within each row are sorted
/// and unique; explicit zeros are kept (elimination writes them on purpose).
class SparseMatrix {
public:
   SparseMatrix() = default;

   /// Accumulates duplicate (i,j) entries, then compresses to CSR.
   class Builder {
   public:
      Builder(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}
      void add(int i, int j, double value);
      SparseMatrix build() const;
      int rows() const { return rows_; }
      int cols() const { return cols_; }

   private:
      int rows_, cols_;
      std::vector<std::map<int, double>> data_;
   };

   static SparseMatrix identity(int n);

   int rows() const { return rows_; }
   int cols() const { return cols_; }
   std::int64_t nnz() const { return static_cast<std::int64_t>(vals_.size()); }

   std::span<const int> row_cols(int i) const;
   std::span<const double> row_vals(int i) const;

   /// Entry lookup; absent entries read as zero.
   double operator()(int i, int j) const;

   /// y = A x
   void mult(const Vector &x, Vector &y) const;
   /// y = A^t x
   void mult_transpose(const Vector &x, Vector &y) const;

   SparseMatrix transpose() const;

   Vector diagonal() const;

   friend SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b);

private:
   int rows_ = 0, cols_ = 0;
   std::vector<int> row_offsets_;
   std::vector<int> col_idx_;
   std::vector<double> vals_;
};

/// y = A x as a convenience wrapper.
Vector spmv(const SparseMatrix &a, const Vector &x);

/// A B with sorted-row merging.
SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b);

/// P^t A P.  A must be square with A.rows() == P.rows().
SparseMatrix sparse_triple_product(const SparseMatrix &p,
                                   const SparseMatrix &a);

} // namespace tensorfem

#endif
