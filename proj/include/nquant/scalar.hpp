#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

namespace nquant {

using Rational = mpq_class;
using Integer = mpz_class;
using Index = std::int64_t;
using Bits = mpfr_prec_t;

inline constexpr Bits kDefaultPrecision = 256;

/// Arbitrary-precision binary floating point value (MPFR). Each value carries
/// its own precision; binary operations round to the smaller of the operand
/// precisions, so a low-precision input can never masquerade as a
/// high-precision result.
class Real {
 public:
  explicit Real(Bits precision = kDefaultPrecision);
  Real(long value, Bits precision);
  Real(const Rational& value, Bits precision);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real pow2(long exponent, Bits precision);
  static Real pi(Bits precision);
  static Real log2(Bits precision);
  static Real parse(std::string_view text, Bits precision);

  Bits precision() const { return mpfr_get_prec(value_); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Base-2 exponent e with 2^(e-1) <= |x| < 2^e; undefined for zero.
  long exponent() const { return mpfr_get_exp(value_); }

  /// Scientific notation with the given number of significant digits.
  std::string to_decimal(int significant_digits) const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real operator-() const;

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }

  friend bool operator==(const Real& a, const Real& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  friend Real abs(Real x);
  friend Real log(const Real& x);
  friend Real sqrt(const Real& x);

 private:
  void narrow_to(Bits bits);

  mpfr_t value_;
};

/// Decimal digits a floating result of the given precision may honestly print.
int justified_digits(Bits precision);
/// Decimal digits that read back to the same value at this precision.
int roundtrip_digits(Bits precision);

/// Parses "p/q", signed integers and decimals with optional exponent
/// ("0.65", "-1.5e-3") into an exact rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string rational_to_string(const Rational& q);

/// Scientific decimal rendering of an exact rational.
std::string rational_to_decimal(const Rational& q, int significant_digits);

/// A numeric value that is either an exact rational or a Real with explicit
/// precision. Arithmetic stays exact while both operands are exact.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q) : value_(std::move(q)) { std::get<Rational>(value_).canonicalize(); }
  Scalar(Real r) : value_(std::move(r)) {}
  Scalar(long v) : value_(Rational(v)) {}
  Scalar(int v) : value_(Rational(v)) {}

  static Scalar parse(std::string_view text) { return Scalar(parse_rational(text)); }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  std::optional<Bits> precision() const;

  /// Throws std::logic_error when the value is not exact.
  const Rational& rational() const;
  const Real& real() const;
  Real to_real(Bits precision) const;
  double to_double() const;
  int sign() const;

  /// "p/q" for exact values, otherwise scientific decimal at the justified
  /// digit count for the value's precision.
  std::string to_string() const;
  std::string to_decimal(int significant_digits) const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);
  Scalar operator-() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  Scalar& apply(const Scalar& rhs, int op_code);

  std::variant<Rational, Real> value_;
};

}  // namespace nquant
