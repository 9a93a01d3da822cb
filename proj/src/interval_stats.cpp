#include "nquant/interval_stats.hpp"

#include <string>

#include "nquant/errors.hpp"

namespace nquant {

template <class T>
MomentCache<T>::MomentCache(const DiscreteDistribution& dist, Index horizon, Bits precision)
    : dist_(&dist), precision_(precision) {
  if (dist.is_finite()) {
    finite_end_ = *dist.size();
    build(*finite_end_);
  } else {
    build(std::max<Index>(horizon, 1));
  }
}

template <class T>
std::size_t MomentCache<T>::checked(Index k, Index upper) const {
  if (k < 1 || k > upper) {
    throw QuantError(ErrorCode::IndexOutOfRange, "index " + std::to_string(k) +
                                                     " outside tabulated range 1.." +
                                                     std::to_string(upper));
  }
  return static_cast<std::size_t>(k);
}

template <class T>
void MomentCache<T>::build(Index horizon) {
  using F = FieldTraits<T>;
  const auto n = static_cast<std::size_t>(horizon);
  points_.assign(n + 1, F::zero(precision_));
  masses_.assign(n + 1, F::zero(precision_));
  for (auto& s : suffix_) s.assign(n + 2, F::zero(precision_));

  if (!finite_end_) {
    const TailFamily& family = *dist_->tail_family();
    if constexpr (F::exact) {
      TailMoments t = tail_moments(*dist_, horizon + 1, precision_);
      suffix_[0][n + 1] = t.mass.rational();
      suffix_[1][n + 1] = t.first.rational();
      suffix_[2][n + 1] = t.second.rational();
    } else {
      if (family.kind == FamilyKind::DyadicReciprocal) {
        suffix_[0][n + 1] = Real::pow2(-static_cast<long>(horizon), precision_);
        suffix_[1][n + 1] = detail::dyadic_reciprocal_tail(horizon + 1, 1, precision_);
        suffix_[2][n + 1] = detail::dyadic_reciprocal_tail(horizon + 1, 2, precision_);
      } else {
        TailMoments t = tail_moments(*dist_, horizon + 1, precision_);
        suffix_[0][n + 1] = t.mass.to_real(precision_);
        suffix_[1][n + 1] = t.first.to_real(precision_);
        suffix_[2][n + 1] = t.second.to_real(precision_);
      }
    }
  }

  for (Index k = horizon; k >= 1; --k) {
    const auto i = static_cast<std::size_t>(k);
    Atom a = dist_->atom(k);
    points_[i] = F::from(a.point, precision_);
    masses_[i] = F::from(a.mass, precision_);
    T moment = masses_[i];
    for (int order = 0; order < 3; ++order) {
      suffix_[order][i] = suffix_[order][i + 1] + moment;
      moment *= points_[i];
    }
  }
  horizon_ = horizon;
}

template <class T>
void MomentCache<T>::grow(Index min_horizon) {
  if (finite_end_ || min_horizon <= horizon_) return;
  Index h = std::max<Index>(horizon_, 1);
  while (h < min_horizon) h *= 2;
  build(h);
}

template <class T>
T MomentCache<T>::prefix(int order, Index i) const {
  if (i < 0 || i > horizon_) {
    throw QuantError(ErrorCode::IndexOutOfRange, "prefix index " + std::to_string(i) +
                                                     " outside 0.." + std::to_string(horizon_));
  }
  return T(suffix_[order][1] - suffix_[order][static_cast<std::size_t>(i + 1)]);
}

template <class T>
void MomentCache<T>::require_range(Index first, Index last) const {
  if (first > last) {
    throw QuantError(ErrorCode::EmptyRangeMass, "empty range [" + std::to_string(first) + ", " +
                                                    std::to_string(last) + "]");
  }
}

template <class T>
T MomentCache<T>::range_sum(int order, Index first, Index last) const {
  require_range(first, last);
  return T(suffix(order, first) - suffix(order, last + 1));
}

template <class T>
T MomentCache<T>::av(Index first, Index last) const {
  T s0 = range_sum(0, first, last);
  if (FieldTraits<T>::sign(s0) <= 0) throw QuantError(ErrorCode::EmptyRangeMass, "range has no mass");
  return T(range_sum(1, first, last) / s0);
}

template <class T>
T MomentCache<T>::av_tail(Index first) const {
  if (finite_end_) return av(first, *finite_end_);
  const T& s0 = suffix(0, first);
  if (FieldTraits<T>::sign(s0) <= 0) throw QuantError(ErrorCode::EmptyRangeMass, "tail has no mass");
  return T(suffix(1, first) / s0);
}

template <class T>
T MomentCache<T>::er(Index first, Index last) const {
  T s0 = range_sum(0, first, last);
  if (FieldTraits<T>::sign(s0) <= 0) throw QuantError(ErrorCode::EmptyRangeMass, "range has no mass");
  if (first == last) return FieldTraits<T>::zero(precision_);
  return variance_sum(s0, range_sum(1, first, last), range_sum(2, first, last), first, last);
}

template <class T>
T MomentCache<T>::er_tail(Index first) const {
  if (finite_end_) return er(first, *finite_end_);
  const T& s0 = suffix(0, first);
  if (FieldTraits<T>::sign(s0) <= 0) throw QuantError(ErrorCode::EmptyRangeMass, "tail has no mass");
  return variance_sum(s0, suffix(1, first), suffix(2, first), first, std::nullopt);
}

template <class T>
T MomentCache<T>::variance_sum(const T& s0, const T& s1, const T& s2, Index first,
                               std::optional<Index> last) const {
  T result = s2 - s1 * s1 / s0;
  if constexpr (!FieldTraits<T>::exact) {
    // Cancellation guard: more than precision/2 bits lost -> shifted two-pass sum.
    Real floor_value = s2 * Real::pow2(-static_cast<long>(precision_ / 2), precision_);
    if (result <= floor_value) return two_pass(T(s1 / s0), first, last);
  }
  return result;
}

template <class T>
T MomentCache<T>::two_pass(const T& mean, Index first, std::optional<Index> last) const {
  T sum = FieldTraits<T>::zero(precision_);
  const Index stop = last ? *last : horizon_;
  for (Index k = first; k <= stop; ++k) {
    T d = point(k) - mean;
    sum += mass(k) * d * d;
  }
  if (last || finite_end_) return sum;

  if constexpr (!FieldTraits<T>::exact) {
    if (dist_->ascending()) {
      throw std::logic_error("two-pass tail summation needs a bounded, descending family");
    }
    // Remaining points lie in (0, x_k], so each term is at most
    // M0(k+1) * max((x_k - mean)^2, mean^2).
    for (Index k = horizon_ + 1;; ++k) {
      Atom a = dist_->atom(k);
      Real x = a.point.to_real(precision_);
      Real d = x - mean;
      sum += a.mass.to_real(precision_) * d * d;
      Real reach = std::max(Real(d * d), Real(mean * mean));
      Real remainder = Real::pow2(-static_cast<long>(k), precision_) * reach;
      if (remainder.is_zero() || sum.is_zero() ||
          remainder.exponent() < sum.exponent() - static_cast<long>(precision_) - 8) {
        break;
      }
    }
  }
  return sum;
}

template class MomentCache<Rational>;
template class MomentCache<Real>;

namespace {

std::variant<MomentCache<Rational>, MomentCache<Real>> make_cache(const DiscreteDistribution& dist,
                                                                  Index horizon, Bits precision) {
  if (dist.exact()) return MomentCache<Rational>(dist, horizon, precision);
  Bits bits = std::min(precision, dist.data_precision().value_or(precision));
  return MomentCache<Real>(dist, horizon, bits);
}

}  // namespace

PrefixSumCache::PrefixSumCache(const DiscreteDistribution& dist, Index horizon, Bits precision)
    : dist_(std::make_shared<const DiscreteDistribution>(dist)),
      cache_(make_cache(*dist_, horizon, precision)) {}

Index PrefixSumCache::horizon() const {
  return std::visit([](const auto& c) { return c.horizon(); }, cache_);
}

void PrefixSumCache::grow(Index min_horizon) {
  std::visit([&](auto& c) { c.grow(min_horizon); }, cache_);
}

Scalar PrefixSumCache::prefix(int order, Index i) const {
  return std::visit([&](const auto& c) { return Scalar(c.prefix(order, i)); }, cache_);
}

Scalar PrefixSumCache::tail(int order, Index k) const {
  return std::visit([&](const auto& c) { return Scalar(c.suffix(order, k)); }, cache_);
}

Scalar PrefixSumCache::av(Index first, Index last) const {
  return std::visit([&](const auto& c) { return Scalar(c.av(first, last)); }, cache_);
}

Scalar PrefixSumCache::av_tail(Index first) const {
  return std::visit([&](const auto& c) { return Scalar(c.av_tail(first)); }, cache_);
}

Scalar PrefixSumCache::er(Index first, Index last) const {
  return std::visit([&](const auto& c) { return Scalar(c.er(first, last)); }, cache_);
}

Scalar PrefixSumCache::er_tail(Index first) const {
  return std::visit([&](const auto& c) { return Scalar(c.er_tail(first)); }, cache_);
}

std::pair<Scalar, Scalar> global_mean_variance(const DiscreteDistribution& dist, Bits precision) {
  PrefixSumCache cache(dist, 1, precision);
  return {cache.av_tail(1), cache.er_tail(1)};
}

}  // namespace nquant
