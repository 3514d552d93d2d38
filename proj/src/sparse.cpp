// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace tensorfem {

void SparseMatrix::Builder::add(int i, int j, double value)
{
   if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
      throw std::invalid_argument("SparseMatrix::Builder::add: index out of "
                                  "range");
   }
   data_[i][j] += value;
}

SparseMatrix SparseMatrix::Builder::build() const
{
   SparseMatrix m;
   m.rows_ = rows_;
   m.cols_ = cols_;
   m.row_offsets_.resize(rows_ + 1, 0);
   std::int64_t nnz = 0;
   for (int i = 0; i < rows_; i++) {
      m.row_offsets_[i] = static_cast<int>(nnz);
      nnz += static_cast<std::int64_t>(data_[i].size());
   }
   m.row_offsets_[rows_] = static_cast<int>(nnz);
   m.col_idx_.reserve(nnz);
   m.vals_.reserve(nnz);
   for (int i = 0; i < rows_; i++) {
      for (const auto &[j, v] : data_[i]) {
         m.col_idx_.push_back(j);
         m.vals_.push_back(v);
      }
   }
   return m;
}

SparseMatrix SparseMatrix::identity(int n)
{
   SparseMatrix m;
   m.rows_ = m.cols_ = n;
   m.row_offsets_.resize(n + 1);
   m.col_idx_.resize(n);
   m.vals_.assign(n, 1.0);
   for (int i = 0; i <= n; i++) { m.row_offsets_[i] = i; }
   for (int i = 0; i < n; i++) { m.col_idx_[i] = i; }
   return m;
}

std::span<const int> SparseMatrix::row_cols(int i) const
{
   return {col_idx_.data() + row_offsets_[i],
           static_cast<size_t>(row_offsets_[i + 1] - row_offsets_[i])};
}

std::span<const double> SparseMatrix::row_vals(int i) const
{
   return {vals_.data() + row_offsets_[i],
           static_cast<size_t>(row_offsets_[i + 1] - row_offsets_[i])};
}

double SparseMatrix::operator()(int i, int j) const
{
   auto cols = row_cols(i);
   auto it = std::lower_bound(cols.begin(), cols.end(), j);
   if (it == cols.end() || *it != j) { return 0.0; }
   return vals_[row_offsets_[i] + (it - cols.begin())];
}

void SparseMatrix::mult(const Vector &x, Vector &y) const
{
   if (x.size() != cols_ || y.size() != rows_) {
      throw std::invalid_argument("SparseMatrix::mult: size mismatch");
   }
   for (int i = 0; i < rows_; i++) {
      double s = 0.0;
      for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; k++) {
         s += vals_[k] * x[col_idx_[k]];
      }
      y[i] = s;
   }
}

void SparseMatrix::mult_transpose(const Vector &x, Vector &y) const
{
   if (x.size() != rows_ || y.size() != cols_) {
      throw std::invalid_argument("SparseMatrix::mult_transpose: size "
                                  "mismatch");
   }
   y.set_zero();
   for (int i = 0; i < rows_; i++) {
      const double xi = x[i];
      for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; k++) {
         y[col_idx_[k]] += vals_[k] * xi;
      }
   }
}

SparseMatrix SparseMatrix::transpose() const
{
   SparseMatrix t;
   t.rows_ = cols_;
   t.cols_ = rows_;
   t.row_offsets_.assign(cols_ + 1, 0);
   for (int j : col_idx_) { t.row_offsets_[j + 1]++; }
   for (int i = 0; i < cols_; i++) { t.row_offsets_[i + 1] += t.row_offsets_[i]; }
   t.col_idx_.resize(vals_.size());
   t.vals_.resize(vals_.size());
   std::vector<int> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
   // Row-major traversal emits each transposed row with ascending columns.
   for (int i = 0; i < rows_; i++) {
      for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; k++) {
         const int pos = next[col_idx_[k]]++;
         t.col_idx_[pos] = i;
         t.vals_[pos] = vals_[k];
      }
   }
   return t;
}

Vector SparseMatrix::diagonal() const
{
   Vector d(std::min(rows_, cols_));
   for (int i = 0; i < d.size(); i++) { d[i] = (*this)(i, i); }
   return d;
}

Vector spmv(const SparseMatrix &a, const Vector &x)
{
   Vector y(a.rows());
   a.mult(x, y);
   return y;
}

SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b)
{
   if (a.cols() != b.rows()) {
      throw std::invalid_argument("multiply: dimension mismatch");
   }
   SparseMatrix c;
   c.rows_ = a.rows();
   c.cols_ = b.cols();
   c.row_offsets_.resize(a.rows() + 1, 0);
   // Row-at-a-time accumulation into a dense workspace of the output width.
   std::vector<double> work(b.cols(), 0.0);
   std::vector<int> stamp(b.cols(), -1);
   std::vector<int> marks;
   for (int i = 0; i < a.rows(); i++) {
      marks.clear();
      for (int ka = a.row_offsets_[i]; ka < a.row_offsets_[i + 1]; ka++) {
         const int j = a.col_idx_[ka];
         const double aij = a.vals_[ka];
         for (int kb = b.row_offsets_[j]; kb < b.row_offsets_[j + 1]; kb++) {
            const int col = b.col_idx_[kb];
            if (stamp[col] != i) {
               stamp[col] = i;
               work[col] = 0.0;
               marks.push_back(col);
            }
            work[col] += aij * b.vals_[kb];
         }
      }
      std::sort(marks.begin(), marks.end());
      for (int col : marks) {
         c.col_idx_.push_back(col);
         c.vals_.push_back(work[col]);
      }
      c.row_offsets_[i + 1] = static_cast<int>(c.col_idx_.size());
   }
   return c;
}

SparseMatrix sparse_triple_product(const SparseMatrix &p,
                                   const SparseMatrix &a)
{
   if (a.rows() != a.cols()) {
      throw std::invalid_argument("sparse_triple_product: A must be square");
   }
   if (a.rows() != p.rows()) {
      throw std::invalid_argument("sparse_triple_product: A and P do not "
                                  "conform");
   }
   return multiply(p.transpose(), multiply(a, p));
}

} // namespace tensorfem
