#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nquant/distribution.hpp"

namespace nquant {

/// The geometric probability-vector families of the inverse problem: masses
/// x, (1-x)x, (1-x)^2 x, ... on 1, 2, 3, ..., either truncated at m atoms
/// (last mass (1-x)^(m-1)) or infinite.
struct GeometricFamily {
  bool infinite = false;
  Index m = 0;

  static GeometricFamily truncated(Index m) { return {false, m}; }
  static GeometricFamily unbounded() { return {true, 0}; }
  DiscreteDistribution at(const Rational& x) const;
  std::string describe() const;
};

/// One constraint on x that the prescribed structure {1, ..., n-1, Av[n, end]}
/// imposes, and where it starts to hold.
struct ConstraintCertificate {
  std::string name;
  std::optional<Index> n;
  /// False when the constraint already holds at the low end of the search.
  bool binding = false;
  /// Bisection bracket: fails at bracket_lo, holds at bracket_hi.
  Rational bracket_lo;
  Rational bracket_hi;
};

struct FeasibleInterval {
  /// Smallest digits-place decimal that satisfies every constraint.
  Rational lower;
  /// Threshold rounded to nearest at the same number of digits.
  Rational threshold;
  Rational upper{1};
  int digits = 10;
  /// Lowest x examined; non-binding constraints hold on [search_floor, 1).
  Rational search_floor;
  Rational bracket_lo;
  Rational bracket_hi;
  std::vector<ConstraintCertificate> certificates;
  /// Index into certificates of the constraint with the largest threshold.
  std::size_t binding = 0;

  std::string lower_text() const;
  std::string threshold_text() const;
};

/// Threshold x* such that every midpoint inequality
///   (n-1) <= (n-1 + Av[n, end]) / 2 <= n
/// and the two-means comparison
///   V(P; {1, Av[2, end]}) <= V(P; {Av[1,2], Av[3, end]})
/// hold for x in [x*, 1). Each constraint is bisected separately over exact
/// dyadic x. For the infinite family n runs over 2..n_check, and the n -> inf
/// limit of the upper midpoint bound is added. The search starts at 2^-40
/// (2^-10 for the infinite family). Throws Infeasible if some
/// constraint fails even near x = 1.
FeasibleInterval feasible_x(const GeometricFamily& family, int digits = 10, Index n_check = 64);

struct ConjectureRow {
  Index n = 0;
  /// {1, ..., n-1, Av[n, end]} is among the optimal codebooks.
  bool holds = false;
  bool unique = false;
  Scalar distortion;
  /// Distance of the midpoint (n-1 + Av[n, end])/2 to n-1 and to n; empty for n = 1.
  std::optional<Rational> lower_slack;
  std::optional<Rational> upper_slack;
};

struct ConjectureReport {
  Rational x;
  std::vector<ConjectureRow> rows;
  bool all_hold() const;
  std::optional<Index> first_failure() const;
};

/// Exact solves for 1 <= n <= n_max (capped at m for the truncated family).
ConjectureReport verify_conjecture(const GeometricFamily& family, const Rational& x, Index n_max);

/// Default sample grid: lower, lower + 10^-3, 7/10, 9/10, 99/100.
std::vector<Rational> conjecture_samples(const FeasibleInterval& interval);

/// q rounded to `digits` decimal places: up (ceil) or to nearest.
Rational round_decimal(const Rational& q, int digits, bool up);
std::string fixed_decimal(const Rational& q, int digits);

}  // namespace nquant
