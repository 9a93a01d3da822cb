#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "nquant/errors.hpp"
#include "nquant/interval_stats.hpp"
#include "nquant/quantization_result.hpp"

namespace nquant::detail {

template <class T>
Codebook make_codebook(const MomentCache<T>& cache, std::vector<Index> cuts,
                       std::optional<Index> last_atom) {
  Codebook cb;
  cb.cuts = std::move(cuts);
  cb.last_atom = last_atom;
  for (std::size_t i = 0; i <= cb.cuts.size(); ++i) {
    auto [first, last] = cb.cell(i);
    cb.centers.push_back(Scalar(last ? cache.av(first, *last) : cache.av_tail(first)));
  }
  return cb;
}

/// Positive mass, centroid and nearest-neighbour conditions for every cell.
/// Only the first atom of a tail cell is inspected: later atoms move away
/// from the neighbouring code point monotonically.
template <class T>
VoronoiReport check_cells(const MomentCache<T>& cache, const Codebook& cb) {
  using F = FieldTraits<T>;
  const Bits bits = cache.precision();
  VoronoiReport report;
  std::vector<T> centers;
  for (const Scalar& s : cb.centers) centers.push_back(F::from(s, bits));

  for (std::size_t i = 0; i < cb.size(); ++i) {
    auto [first, last] = cb.cell(i);
    T mass = last ? cache.range_sum(0, first, *last) : T(cache.suffix(0, first));
    if (F::sign(mass) <= 0) {
      report.positive_mass = false;
      continue;
    }
    T mean = last ? cache.av(first, *last) : cache.av_tail(first);
    if (!F::tied(mean, centers[i], bits)) report.centroid = false;

    const Index stop = last ? *last : first;
    for (Index k = first; k <= stop; ++k) {
      const T& x = cache.point(k);
      T own = x - centers[i];
      own *= own;
      for (std::size_t nb : {i - 1, i + 1}) {
        if (nb >= cb.size()) continue;  // wraps for i == 0
        T other = x - centers[nb];
        other *= other;
        if (F::tied(own, other, bits)) {
          report.ties.push_back(k);
        } else if (own > other) {
          report.voronoi = false;
        }
      }
    }
  }
  std::sort(report.ties.begin(), report.ties.end());
  report.ties.erase(std::unique(report.ties.begin(), report.ties.end()), report.ties.end());
  return report;
}

/// V(P; codebook) with nearest-point assignment, accumulated cell by cell in
/// index order as Er + mass * (Av - a)^2. Exact in rational mode.
template <class T>
T distortion_t(MomentCache<T>& cache, const std::vector<T>& sorted_points, Index horizon_cap) {
  using F = FieldTraits<T>;
  const Bits bits = cache.precision();
  const DiscreteDistribution& dist = cache.distribution();
  const std::size_t count = sorted_points.size();

  auto nearest = [&](const T& x) {
    // first index whose point is at least x, then compare with its left neighbour
    auto it = std::lower_bound(sorted_points.begin(), sorted_points.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - sorted_points.begin());
    if (hi == count) return count - 1;
    if (hi == 0) return std::size_t{0};
    T left = x - sorted_points[hi - 1];
    T right = sorted_points[hi] - x;
    return right < left ? hi : hi - 1;  // equal distance -> lower code point
  };

  // Code point that owns all atoms far enough along the index order.
  std::optional<std::size_t> limit_code;
  if (!dist.is_finite()) {
    if (dist.ascending()) {
      limit_code = count - 1;
    } else {
      // points decrease to 0: the code point nearest to 0 owns the tail
      limit_code = nearest(F::zero(bits));
    }
  }

  T total = F::zero(bits);
  auto add_cell = [&](Index first, std::optional<Index> last, std::size_t code) {
    T mass = last ? cache.range_sum(0, first, *last) : T(cache.suffix(0, first));
    T mean = last ? cache.av(first, *last) : cache.av_tail(first);
    T er = last ? cache.er(first, *last) : cache.er_tail(first);
    T gap = mean - sorted_points[code];
    total += er + mass * gap * gap;
  };

  Index run_start = 1;
  std::size_t run_code = 0;
  for (Index k = 1;; ++k) {
    if (cache.end() && k > *cache.end()) {
      add_cell(run_start, k - 1, run_code);
      break;
    }
    if (!cache.end() && k > cache.horizon()) {
      if (k > horizon_cap) {
        throw QuantError(ErrorCode::HorizonUnstable,
                         "codebook tail not reached within " + std::to_string(horizon_cap) + " atoms");
      }
      cache.grow(k + 1);
    }
    std::size_t code = nearest(cache.point(k));
    if (k == 1) {
      run_code = code;
    } else if (code != run_code) {
      add_cell(run_start, k - 1, run_code);
      run_start = k;
      run_code = code;
    }
    if (limit_code && code == *limit_code) {
      add_cell(run_start, std::nullopt, run_code);
      break;
    }
  }
  return total;
}

}  // namespace nquant::detail
