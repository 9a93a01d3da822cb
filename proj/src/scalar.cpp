#include "nquant/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nquant {

Real::Real(Bits precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Bits precision) {
  mpfr_init2(value_, precision);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const Rational& value, Bits precision) {
  mpfr_init2(value_, precision);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (precision() != other.precision()) mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::pow2(long exponent, Bits precision) {
  Real r(precision);
  mpfr_set_ui_2exp(r.value_, 1, exponent, MPFR_RNDN);
  return r;
}

Real Real::pi(Bits precision) {
  Real r(precision);
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

Real Real::log2(Bits precision) {
  Real r(precision);
  mpfr_const_log2(r.value_, MPFR_RNDN);
  return r;
}

Real Real::parse(std::string_view text, Bits precision) {
  Real r(precision);
  std::string s(text);
  if (mpfr_set_str(r.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

void Real::narrow_to(Bits bits) {
  if (bits < precision()) mpfr_prec_round(value_, bits, MPFR_RNDN);
}

Real& Real::operator+=(const Real& rhs) {
  narrow_to(rhs.precision());
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  narrow_to(rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  narrow_to(rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  narrow_to(rhs.precision());
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real abs(Real x) {
  mpfr_abs(x.value_, x.value_, MPFR_RNDN);
  return x;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.value_, x.value_, MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.value_, x.value_, MPFR_RNDN);
  return r;
}

std::string Real::to_decimal(int significant_digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";
  significant_digits = std::max(significant_digits, 1);
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant_digits), value_,
                           MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string out;
  if (digits.front() == '-') {
    out.push_back('-');
    digits.erase(0, 1);
  }
  // mpfr_get_str yields 0.d1d2... x 10^exp10
  out.push_back(digits[0]);
  if (digits.size() > 1) {
    out.push_back('.');
    out.append(digits, 1, std::string::npos);
  }
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

int justified_digits(Bits precision) {
  int digits = static_cast<int>(std::floor(static_cast<double>(precision) * std::log10(2.0))) - 5;
  return std::max(digits, 1);
}

int roundtrip_digits(Bits precision) {
  return 1 + static_cast<int>(std::ceil(static_cast<double>(precision) * std::log10(2.0)));
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational or decimal number: '" + s + "'");
  };
  auto trim = [](std::string t) {
    auto b = t.find_first_not_of(" \t");
    auto e = t.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  s = trim(s);
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = trim(s.substr(0, slash));
    std::string den = trim(s.substr(slash + 1));
    auto is_int = [](const std::string& t, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
      if (i >= t.size()) return false;
      return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                         [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    if (!is_int(num, true) || !is_int(den, false)) return fail();
    if (num[0] == '+') num.erase(0, 1);
    Integer n(num, 10), d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
  }

  // decimal: [sign] digits [. digits] [e [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string mantissa;
  long frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return fail();
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return fail();
    ++i;
    std::string e = s.substr(i);
    if (e.empty()) return fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(e, &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != e.size() || e[0] == ' ') return fail();
  }
  Integer n(mantissa, 10);
  if (negative) n = -n;
  long shift = exponent - frac_digits;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift < 0 ? Rational(n, scale) : Rational(n * scale);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

std::string rational_to_decimal(const Rational& q, int significant_digits) {
  if (q == 0) return "0";
  Bits bits = static_cast<Bits>(significant_digits * 3.33) + 64;
  return Real(q, bits).to_decimal(significant_digits);
}

std::optional<Bits> Scalar::precision() const {
  if (is_exact()) return std::nullopt;
  return std::get<Real>(value_).precision();
}

const Rational& Scalar::rational() const {
  if (!is_exact()) throw std::logic_error("scalar is not an exact rational");
  return std::get<Rational>(value_);
}

const Real& Scalar::real() const {
  if (is_exact()) throw std::logic_error("scalar is an exact rational, not a floating value");
  return std::get<Real>(value_);
}

Real Scalar::to_real(Bits bits) const {
  if (is_exact()) return Real(std::get<Rational>(value_), bits);
  const Real& r = std::get<Real>(value_);
  Real out(bits);
  mpfr_set(out.get(), r.get(), MPFR_RNDN);
  return out;
}

double Scalar::to_double() const {
  return is_exact() ? std::get<Rational>(value_).get_d() : std::get<Real>(value_).to_double();
}

int Scalar::sign() const {
  return is_exact() ? sgn(std::get<Rational>(value_)) : std::get<Real>(value_).sign();
}

std::string Scalar::to_string() const {
  if (is_exact()) return rational_to_string(std::get<Rational>(value_));
  const Real& r = std::get<Real>(value_);
  return r.to_decimal(justified_digits(r.precision()));
}

std::string Scalar::to_decimal(int significant_digits) const {
  if (is_exact()) return rational_to_decimal(std::get<Rational>(value_), significant_digits);
  return std::get<Real>(value_).to_decimal(significant_digits);
}

namespace {

enum class ArithOp { Add, Sub, Mul, Div };

template <class T>
T combine(const T& a, const T& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return T(a + b);
    case ArithOp::Sub: return T(a - b);
    case ArithOp::Mul: return T(a * b);
    case ArithOp::Div: break;
  }
  return T(a / b);
}

}  // namespace

Scalar& Scalar::apply(const Scalar& rhs, int op_code) {
  auto op = static_cast<ArithOp>(op_code);
  if (is_exact() && rhs.is_exact()) {
    value_ = combine(std::get<Rational>(value_), rhs.rational(), op);
    return *this;
  }
  // Exact operands adopt the precision of the floating one.
  Bits bits = precision() && rhs.precision() ? std::min(*precision(), *rhs.precision())
                                             : precision().value_or(rhs.precision().value_or(kDefaultPrecision));
  Real a = to_real(precision().value_or(bits));
  Real b = rhs.to_real(rhs.precision().value_or(bits));
  value_ = combine(a, b, op);
  return *this;
}

Scalar& Scalar::operator+=(const Scalar& rhs) { return apply(rhs, 0); }
Scalar& Scalar::operator-=(const Scalar& rhs) { return apply(rhs, 1); }
Scalar& Scalar::operator*=(const Scalar& rhs) { return apply(rhs, 2); }
Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.sign() == 0) throw std::domain_error("division by zero");
  return apply(rhs, 3);
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(value_)));
  return Scalar(-std::get<Real>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) { return (a <=> b) == 0; }

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    int c = cmp(a.rational(), b.rational());
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  if (a.is_exact()) {
    int c = mpfr_cmp_q(b.real().get(), a.rational().get_mpq_t());
    return c > 0 ? std::partial_ordering::less
                 : (c < 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  if (b.is_exact()) {
    int c = mpfr_cmp_q(a.real().get(), b.rational().get_mpq_t());
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.real() <=> b.real();
}

}  // namespace nquant
