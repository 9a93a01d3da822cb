#include "nquant/distribution.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nquant/errors.hpp"

namespace nquant {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::MassSumMismatch: return "MassSumMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyRangeMass: return "EmptyRangeMass";
    case ErrorCode::EmptyCellCollapse: return "EmptyCellCollapse";
    case ErrorCode::HorizonUnstable: return "HorizonUnstable";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::GeometricNaturals: return "geometric_naturals";
    case FamilyKind::DyadicReciprocal: return "dyadic_reciprocal";
    case FamilyKind::GeometricTruncated: return "geometric_truncated";
    case FamilyKind::GeometricInfinite: return "geometric_infinite";
  }
  return "unknown";
}

namespace {

Rational rational_pow(const Rational& base, unsigned long e) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational pow2_rational(Index e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

void require_unit_interval(const Rational& x) {
  if (x <= 0 || x >= 1) {
    throw QuantError(ErrorCode::InvalidArgument, "family parameter x must satisfy 0 < x < 1, got " +
                                                     rational_to_string(x));
  }
}

}  // namespace

DiscreteDistribution DiscreteDistribution::finite(std::vector<Scalar> points,
                                                  std::vector<Scalar> masses, bool normalize) {
  if (points.empty() || points.size() != masses.size()) {
    throw QuantError(ErrorCode::InvalidArgument,
                     "points and masses must be nonempty lists of equal length");
  }
  std::optional<Bits> bits;
  for (const auto* list : {&points, &masses}) {
    for (const Scalar& s : *list) {
      if (auto p = s.precision()) bits = bits ? std::min(*bits, *p) : *p;
    }
  }
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i].sign() <= 0) {
      throw QuantError(ErrorCode::NonPositiveMass,
                       "mass #" + std::to_string(i + 1) + " is " + masses[i].to_string());
    }
  }
  if (bits) {
    for (auto* list : {&points, &masses}) {
      for (Scalar& s : *list) s = Scalar(s.to_real(*bits));
    }
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  DiscreteDistribution d;
  d.data_precision_ = bits;
  d.atoms_.reserve(points.size());
  for (std::size_t i : order) {
    if (!d.atoms_.empty() && d.atoms_.back().point == points[i]) {
      throw QuantError(ErrorCode::DuplicatePoint, "point " + points[i].to_string() +
                                                      " appears more than once");
    }
    d.atoms_.push_back({points[i], masses[i]});
  }

  Scalar total(0);
  for (const Atom& a : d.atoms_) total += a.mass;
  if (normalize) {
    for (Atom& a : d.atoms_) a.mass /= total;
  } else if (total.is_exact()) {
    if (total.rational() != 1) {
      throw QuantError(ErrorCode::MassSumMismatch, "masses sum to " + total.to_string());
    }
  } else {
    Real gap = abs(total.real() - Real(1L, *bits));
    if (gap > Real::pow2(8 - static_cast<long>(*bits), *bits)) {
      throw QuantError(ErrorCode::MassSumMismatch,
                       "masses sum to " + total.to_decimal(30) + ", not 1 within tolerance");
    }
  }
  return d;
}

DiscreteDistribution DiscreteDistribution::family(const TailFamily& family) {
  DiscreteDistribution d;
  switch (family.kind) {
    case FamilyKind::GeometricNaturals:
    case FamilyKind::DyadicReciprocal:
      d.family_ = TailFamily{family.kind, 0, Rational(0)};
      break;
    case FamilyKind::GeometricInfinite:
      require_unit_interval(family.x);
      d.family_ = TailFamily{family.kind, 0, family.x};
      break;
    case FamilyKind::GeometricTruncated: {
      require_unit_interval(family.x);
      if (family.m < 3) {
        throw QuantError(ErrorCode::InvalidArgument,
                         "geometric_truncated needs m >= 3, got " + std::to_string(family.m));
      }
      d.family_ = family;
      Rational q = 1 - family.x;
      Rational w(1);  // (1-x)^(j-1)
      for (Index j = 1; j <= family.m; ++j) {
        Rational mass = j < family.m ? Rational(w * family.x) : w;
        d.atoms_.push_back({Scalar(Rational(j)), Scalar(mass)});
        w *= q;
      }
      break;
    }
  }
  return d;
}

DiscreteDistribution DiscreteDistribution::geometric_naturals() {
  return family({FamilyKind::GeometricNaturals, 0, Rational(0)});
}

DiscreteDistribution DiscreteDistribution::dyadic_reciprocal() {
  return family({FamilyKind::DyadicReciprocal, 0, Rational(0)});
}

DiscreteDistribution DiscreteDistribution::geometric_truncated(Index m, const Rational& x) {
  return family({FamilyKind::GeometricTruncated, m, x});
}

DiscreteDistribution DiscreteDistribution::geometric_infinite(const Rational& x) {
  return family({FamilyKind::GeometricInfinite, 0, x});
}

std::optional<Index> DiscreteDistribution::size() const {
  if (!is_finite()) return std::nullopt;
  return static_cast<Index>(atoms_.size());
}

bool DiscreteDistribution::exact() const {
  if (family_) return family_->kind != FamilyKind::DyadicReciprocal;
  return !data_precision_.has_value();
}

bool DiscreteDistribution::ascending() const {
  return !family_ || family_->kind != FamilyKind::DyadicReciprocal;
}

Atom DiscreteDistribution::atom(Index k) const {
  if (k < 1) throw QuantError(ErrorCode::IndexOutOfRange, "atom index must be >= 1");
  if (is_finite()) {
    if (k > static_cast<Index>(atoms_.size())) {
      throw QuantError(ErrorCode::IndexOutOfRange, "atom " + std::to_string(k) + " past support size " +
                                                       std::to_string(atoms_.size()));
    }
    return atoms_[static_cast<std::size_t>(k - 1)];
  }
  switch (family_->kind) {
    case FamilyKind::GeometricNaturals:
      return {Scalar(Rational(k)), Scalar(pow2_rational(-k))};
    case FamilyKind::DyadicReciprocal:
      return {Scalar(Rational(1, static_cast<unsigned long>(k))), Scalar(pow2_rational(-k))};
    case FamilyKind::GeometricInfinite: {
      Rational mass = rational_pow(1 - family_->x, static_cast<unsigned long>(k - 1)) * family_->x;
      return {Scalar(Rational(k)), Scalar(mass)};
    }
    case FamilyKind::GeometricTruncated: break;
  }
  throw std::logic_error("unreachable family kind");
}

std::vector<Atom> DiscreteDistribution::enumerate_prefix(Index count) const {
  if (count < 1) throw QuantError(ErrorCode::IndexOutOfRange, "count must be >= 1");
  if (auto m = size(); m && count > *m) {
    throw QuantError(ErrorCode::IndexOutOfRange, "count " + std::to_string(count) +
                                                     " exceeds support size " + std::to_string(*m));
  }
  std::vector<Atom> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index k = 1; k <= count; ++k) out.push_back(atom(k));
  return out;
}

std::string DiscreteDistribution::describe() const {
  std::ostringstream os;
  if (!family_) {
    os << "finite(" << atoms_.size() << " atoms)";
  } else {
    os << to_string(family_->kind);
    if (family_->kind == FamilyKind::GeometricTruncated) os << "(m=" << family_->m << ", ";
    if (family_->kind == FamilyKind::GeometricInfinite) os << "(";
    if (family_->kind == FamilyKind::GeometricTruncated ||
        family_->kind == FamilyKind::GeometricInfinite) {
      os << "x=" << rational_to_string(family_->x) << ")";
    }
  }
  return os.str();
}

namespace detail {

Real dyadic_reciprocal_tail(Index k, int order, Bits precision) {
  const Bits work = precision + 32;
  Real sum(work);
  Real term(work);
  for (Index n = k;; ++n) {
    mpfr_set_ui_2exp(term.get(), 1, -n, MPFR_RNDN);
    for (int i = 0; i < order; ++i) mpfr_div_si(term.get(), term.get(), n, MPFR_RNDN);
    sum += term;
    // term >= remainder, so stop once it is negligible relative to the sum
    if (term.exponent() < sum.exponent() - static_cast<long>(precision) - 16) break;
  }
  Real out(precision);
  mpfr_set(out.get(), sum.get(), MPFR_RNDN);
  return out;
}

}  // namespace detail

TailMoments tail_moments(const DiscreteDistribution& dist, Index k, Bits precision) {
  if (k < 1) throw QuantError(ErrorCode::IndexOutOfRange, "tail index must be >= 1");
  if (dist.is_finite()) {
    Index m = *dist.size();
    if (k > m) {
      throw QuantError(ErrorCode::IndexOutOfRange,
                       "tail index " + std::to_string(k) + " past support size " + std::to_string(m));
    }
    TailMoments t{Scalar(0), Scalar(0), Scalar(0)};
    for (Index j = m; j >= k; --j) {
      Atom a = dist.atom(j);
      t.mass += a.mass;
      t.first += a.mass * a.point;
      t.second += a.mass * a.point * a.point;
    }
    return t;
  }

  const TailFamily& f = *dist.tail_family();
  switch (f.kind) {
    case FamilyKind::GeometricNaturals: {
      Rational w = pow2_rational(1 - k);
      Rational kk(k);
      return {Scalar(w), Scalar(Rational((kk + 1) * w)), Scalar(Rational((kk * kk + 2 * kk + 3) * w))};
    }
    case FamilyKind::GeometricInfinite: {
      const Rational& x = f.x;
      Rational w = rational_pow(1 - x, static_cast<unsigned long>(k - 1));
      Rational s(k - 1);
      Rational m1 = w * (s + 1 / x);
      Rational m2 = w * (s * s + 2 * s / x + (2 - x) / (x * x));
      return {Scalar(w), Scalar(m1), Scalar(m2)};
    }
    case FamilyKind::DyadicReciprocal:
      return {Scalar(Real::pow2(1 - static_cast<long>(k), precision)),
              Scalar(detail::dyadic_reciprocal_tail(k, 1, precision)),
              Scalar(detail::dyadic_reciprocal_tail(k, 2, precision))};
    case FamilyKind::GeometricTruncated: break;
  }
  throw std::logic_error("unreachable family kind");
}

}  // namespace nquant
