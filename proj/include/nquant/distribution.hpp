#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nquant/scalar.hpp"

namespace nquant {

/// Built-in analytic families. Atoms are indexed 1, 2, 3, ... in the order
/// listed for each family.
enum class FamilyKind {
  GeometricNaturals,   // point n, mass 2^-n
  DyadicReciprocal,    // point 1/n, mass 2^-n (points descend with the index)
  GeometricTruncated,  // points 1..m, masses x, (1-x)x, ..., (1-x)^(m-2)x, (1-x)^(m-1)
  GeometricInfinite,   // point j, mass (1-x)^(j-1)x
};

std::string to_string(FamilyKind kind);

struct TailFamily {
  FamilyKind kind = FamilyKind::GeometricNaturals;
  Index m = 0;    // GeometricTruncated only
  Rational x{0};  // GeometricTruncated and GeometricInfinite
};

struct Atom {
  Scalar point;
  Scalar mass;
};

/// Suffix sums from atom k onwards: mass, first moment, second moment.
struct TailMoments {
  Scalar mass;
  Scalar first;
  Scalar second;
};

/// A discrete probability distribution on the real line: either a finite list
/// of atoms or one of the built-in families. Immutable once built.
class DiscreteDistribution {
 public:
  /// Sorts atoms by point. Masses must sum to one (exactly for rational data,
  /// within 2^(8 - precision) for floating data) unless `normalize` is set.
  static DiscreteDistribution finite(std::vector<Scalar> points, std::vector<Scalar> masses,
                                     bool normalize = false);
  static DiscreteDistribution family(const TailFamily& family);

  static DiscreteDistribution geometric_naturals();
  static DiscreteDistribution dyadic_reciprocal();
  static DiscreteDistribution geometric_truncated(Index m, const Rational& x);
  static DiscreteDistribution geometric_infinite(const Rational& x);

  bool is_finite() const { return !family_ || family_->kind == FamilyKind::GeometricTruncated; }
  /// Atom count of a finite distribution.
  std::optional<Index> size() const;
  /// True when every moment query is an exact rational.
  bool exact() const;
  /// Precision of floating atom data, if any.
  std::optional<Bits> data_precision() const { return data_precision_; }
  /// Points increase with the index (false only for DyadicReciprocal).
  bool ascending() const;
  const std::optional<TailFamily>& tail_family() const { return family_; }

  /// Atom k (1-based). Throws IndexOutOfRange past the end of a finite support.
  Atom atom(Index k) const;
  std::vector<Atom> enumerate_prefix(Index count) const;

  std::string describe() const;

 private:
  DiscreteDistribution() = default;

  std::vector<Atom> atoms_;
  std::optional<TailFamily> family_;
  std::optional<Bits> data_precision_;
};

/// (M0, M1, M2) from atom k to the end. Exact for rational finite data and the
/// closed-form families; DyadicReciprocal sums are floating with absolute
/// error below 2^-precision.
TailMoments tail_moments(const DiscreteDistribution& dist, Index k, Bits precision = kDefaultPrecision);

namespace detail {

/// Sum over n >= k of 2^-n * n^-order, by direct summation. Consecutive terms
/// shrink by at least half, so the remainder after the last term is below it.
Real dyadic_reciprocal_tail(Index k, int order, Bits precision);

}  // namespace detail

}  // namespace nquant
