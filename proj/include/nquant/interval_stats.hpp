#pragma once

#include <array>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "nquant/distribution.hpp"
#include "nquant/field.hpp"

namespace nquant {

/// Cumulative mass, first and second moment sums over the atoms of a
/// distribution, tabulated up to a horizon so that interval statistics are
/// O(1) per query.
///
/// Sums are accumulated from the far end (suffix sums M_j(k) = sum over
/// n >= k); a range [k, l] is M_j(k) - M_j(l+1). For geometrically decaying
/// families this difference never cancels more than one bit, which is what
/// makes 10^-100-sized variances recoverable at 512 bits. For infinite
/// families M_j(horizon+1) is the analytic (or summed) tail.
///
/// Not synchronized: each solver owns its cache.
template <class T>
class MomentCache {
 public:
  MomentCache(const DiscreteDistribution& dist, Index horizon, Bits precision);

  const DiscreteDistribution& distribution() const { return *dist_; }
  Bits precision() const { return precision_; }
  Index horizon() const { return horizon_; }

  /// Extends the horizon by doubling until it reaches `min_horizon`. No-op for
  /// finite distributions.
  void grow(Index min_horizon);

  const T& point(Index k) const { return points_[checked(k, horizon_)]; }
  const T& mass(Index k) const { return masses_[checked(k, horizon_)]; }

  /// M_order(k) for 1 <= k <= horizon + 1.
  const T& suffix(int order, Index k) const { return suffix_[order][checked(k, horizon_ + 1)]; }
  /// S_order[i] = sum over atoms 1..i, for 0 <= i <= horizon.
  T prefix(int order, Index i) const;

  T range_sum(int order, Index first, Index last) const;

  T av(Index first, Index last) const;
  T av_tail(Index first) const;
  T er(Index first, Index last) const;
  T er_tail(Index first) const;

  /// Last tabulated index of a finite support, or nothing for infinite families.
  std::optional<Index> end() const { return finite_end_; }

 private:
  std::size_t checked(Index k, Index upper) const;
  void build(Index horizon);
  void require_range(Index first, Index last) const;
  T variance_sum(const T& s0, const T& s1, const T& s2, Index first, std::optional<Index> last) const;
  T two_pass(const T& mean, Index first, std::optional<Index> last) const;

  const DiscreteDistribution* dist_;
  Bits precision_;
  Index horizon_ = 0;
  std::optional<Index> finite_end_;
  std::vector<T> points_;
  std::vector<T> masses_;
  std::array<std::vector<T>, 3> suffix_;
};

extern template class MomentCache<Rational>;
extern template class MomentCache<Real>;

/// Scalar-valued facade over MomentCache: rational backend for exact
/// distributions, floating backend otherwise.
class PrefixSumCache {
 public:
  PrefixSumCache(const DiscreteDistribution& dist, Index horizon, Bits precision = kDefaultPrecision);

  bool exact() const { return std::holds_alternative<MomentCache<Rational>>(cache_); }
  Index horizon() const;
  void grow(Index min_horizon);

  /// S_order[i], cumulative over atoms 1..i.
  Scalar prefix(int order, Index i) const;
  Scalar tail(int order, Index k) const;
  Scalar av(Index first, Index last) const;
  Scalar av_tail(Index first) const;
  Scalar er(Index first, Index last) const;
  Scalar er_tail(Index first) const;

 private:
  std::shared_ptr<const DiscreteDistribution> dist_;
  std::variant<MomentCache<Rational>, MomentCache<Real>> cache_;
};

/// (Av, Er) over the whole support.
std::pair<Scalar, Scalar> global_mean_variance(const DiscreteDistribution& dist,
                                               Bits precision = kDefaultPrecision);

}  // namespace nquant
