// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_DENSE_HPP
#define TENSORFEM_DENSE_HPP

#include <cassert>
#include <vector>

namespace tensorfem {

/// Small dense row-major matrix used for 1D evaluation operators, per-element
/// nodal grids and local element matrices.
class DenseMatrix {
public:
   DenseMatrix() = default;
   DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

   int rows() const { return rows_; }
   int cols() const { return cols_; }

   double &operator()(int i, int j)
   {
      assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
      return a_[static_cast<size_t>(i) * cols_ + j];
   }
   double operator()(int i, int j) const
   {
      assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
      return a_[static_cast<size_t>(i) * cols_ + j];
   }

   double *data() { return a_.data(); }
   const double *data() const { return a_.data(); }

   void set_zero() { a_.assign(a_.size(), 0.0); }

private:
   int rows_ = 0, cols_ = 0;
   std::vector<double> a_;
};

} // namespace tensorfem

#endif
