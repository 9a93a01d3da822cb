#pragma once

#include <algorithm>

#include "nquant/scalar.hpp"

namespace nquant {

/// Adapts the two arithmetic backends to the templated solvers. Rational is
/// exact; Real compares with a relative tolerance of 2^(-precision/2).
template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;

  static Rational zero(Bits) { return Rational(0); }
  static Rational from(const Scalar& s, Bits) { return s.rational(); }
  static Rational from(const Rational& q, Bits) { return q; }
  static Scalar to_scalar(const Rational& q) { return Scalar(q); }
  static int sign(const Rational& q) { return sgn(q); }
  static bool tied(const Rational& a, const Rational& b, Bits) { return a == b; }
};

template <>
struct FieldTraits<Real> {
  static constexpr bool exact = false;

  static Real zero(Bits bits) { return Real(0L, bits); }
  static Real from(const Scalar& s, Bits bits) { return s.to_real(bits); }
  static Real from(const Rational& q, Bits bits) { return Real(q, bits); }
  static Scalar to_scalar(const Real& r) { return Scalar(r); }
  static int sign(const Real& r) { return r.sign(); }

  static bool tied(const Real& a, const Real& b, Bits bits) {
    if (a == b) return true;
    Real scale = std::max(abs(a), abs(b));
    Real gap = abs(a - b);
    return gap <= scale * Real::pow2(-static_cast<long>(bits / 2), bits);
  }
};

}  // namespace nquant
