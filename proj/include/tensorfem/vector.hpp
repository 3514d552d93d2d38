// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_VECTOR_HPP
#define TENSORFEM_VECTOR_HPP

#include <cassert>
#include <vector>

namespace tensorfem {

/// Contiguous vector of doubles with the handful of BLAS-1 operations the
/// solvers need.
class Vector {
public:
   Vector() = default;
   explicit Vector(int n, double value = 0.0)
      : v_(static_cast<size_t>(n), value) {}

   int size() const { return static_cast<int>(v_.size()); }

   double &operator[](int i)
   {
      assert(i >= 0 && i < size());
      return v_[static_cast<size_t>(i)];
   }
   double operator[](int i) const
   {
      assert(i >= 0 && i < size());
      return v_[static_cast<size_t>(i)];
   }

   double *data() { return v_.data(); }
   const double *data() const { return v_.data(); }

   void set_zero();
   /// this += a * x
   void axpy(double a, const Vector &x);
   void scale(double a);

   double dot(const Vector &x) const;
   double norm2() const;
   double norm_inf() const;
   bool is_finite() const;

private:
   std::vector<double> v_;
};

} // namespace tensorfem

#endif
