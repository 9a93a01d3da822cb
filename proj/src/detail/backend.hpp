#pragma once

#include <algorithm>
#include <utility>

#include "nquant/interval_stats.hpp"

namespace nquant::detail {

/// Working precision for a floating distribution: the request, capped by the
/// precision of the atom data itself.
inline Bits effective_precision(const DiscreteDistribution& dist, Bits requested) {
  return std::min(requested, dist.data_precision().value_or(requested));
}

/// Runs `fn` with a MomentCache of the backend the distribution calls for:
/// exact rationals when every moment is rational, MPFR otherwise.
template <class Fn>
decltype(auto) with_cache(const DiscreteDistribution& dist, Index horizon, Bits precision, Fn&& fn) {
  if (dist.exact()) {
    MomentCache<Rational> cache(dist, horizon, precision);
    return std::forward<Fn>(fn)(cache);
  }
  MomentCache<Real> cache(dist, horizon, effective_precision(dist, precision));
  return std::forward<Fn>(fn)(cache);
}

}  // namespace nquant::detail
