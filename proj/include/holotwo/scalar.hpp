#pragma once

#include <cmath>
#include <complex>

#include "holotwo/rational.hpp"

namespace holotwo {

using Cx = std::complex<double>;

// Uniform access to the two coefficient fields the library runs over:
// exact rationals for construction/certification, complex doubles for the
// numeric pipeline.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_int(long long n) { return Rat(n); }
  static Rat from_rat(const Rat& r) { return r; }
  static double abs(const Rat& r) { return std::fabs(r.to_double()); }
  static bool is_zero(const Rat& r) { return r.is_zero(); }
};

template <>
struct scalar_traits<Cx> {
  static constexpr bool exact = false;
  static Cx zero() { return Cx(0.0, 0.0); }
  static Cx one() { return Cx(1.0, 0.0); }
  static Cx from_int(long long n) { return Cx(static_cast<double>(n), 0.0); }
  static Cx from_rat(const Rat& r) { return Cx(r.to_double(), 0.0); }
  static double abs(const Cx& z) { return std::abs(z); }
  static bool is_zero(const Cx& z) { return z == Cx(0.0, 0.0); }
};

}  // namespace holotwo
