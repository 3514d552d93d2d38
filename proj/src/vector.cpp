// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/vector.hpp"

#include <cmath>
#include <stdexcept>

namespace tensorfem {

void Vector::set_zero() { v_.assign(v_.size(), 0.0); }

void Vector::axpy(double a, const Vector &x)
{
   if (x.size() != size()) {
      throw std::invalid_argument("Vector::axpy: size mismatch");
   }
   for (size_t i = 0; i < v_.size(); i++) { v_[i] += a * x.v_[i]; }
}

void Vector::scale(double a)
{
   for (double &vi : v_) { vi *= a; }
}

double Vector::dot(const Vector &x) const
{
   if (x.size() != size()) {
      throw std::invalid_argument("Vector::dot: size mismatch");
   }
   double s = 0.0;
   for (size_t i = 0; i < v_.size(); i++) { s += v_[i] * x.v_[i]; }
   return s;
}

double Vector::norm2() const { return std::sqrt(dot(*this)); }

double Vector::norm_inf() const
{
   double m = 0.0;
   for (double vi : v_) { m = std::max(m, std::abs(vi)); }
   return m;
}

bool Vector::is_finite() const
{
   for (double vi : v_) {
      if (!std::isfinite(vi)) { return false; }
   }
   return true;
}

} // namespace tensorfem
