#include "nquant/solver_finite.hpp"

#include <algorithm>
#include <string>

#include "detail/backend.hpp"
#include "detail/codebook_tools.hpp"
#include "detail/contiguous_dp.hpp"
#include "nquant/errors.hpp"

namespace nquant {

std::vector<Scalar> Codebook::points() const {
  std::vector<Scalar> out = centers;
  std::sort(out.begin(), out.end(), [](const Scalar& a, const Scalar& b) { return a < b; });
  return out;
}

std::pair<Index, std::optional<Index>> Codebook::cell(std::size_t i) const {
  Index first = i == 0 ? 1 : cuts[i - 1] + 1;
  if (i < cuts.size()) return {first, cuts[i]};
  return {first, last_atom};
}

namespace {

void require_finite(const DiscreteDistribution& dist, const char* what) {
  if (!dist.is_finite()) {
    throw QuantError(ErrorCode::InvalidArgument,
                     std::string(what) + " needs a finite distribution, got " + dist.describe());
  }
}

template <class T>
std::vector<QuantizationResult> sweep(const MomentCache<T>& cache, Index n_min, Index n_max,
                                      const SolveOptions& options) {
  const Index m = *cache.end();
  const Index max_cells = std::min(n_max, m);
  detail::ContiguousDp<T> dp(cache, m, max_cells);

  std::vector<QuantizationResult> results;
  for (Index n = n_min; n <= n_max; ++n) {
    const Index cells = std::min(n, m);
    QuantizationResult r;
    r.n = n;
    r.distortion = Scalar(dp.cost(cells, m));
    r.num_optima = dp.paths(cells, m);
    r.exact = FieldTraits<T>::exact;
    r.precision_bits = cache.precision();

    std::size_t limit = options.mode == SolveMode::All ? options.max_optima : 1;
    auto cut_sets = dp.cut_vectors(cells, m, limit);
    std::sort(cut_sets.begin(), cut_sets.end());
    r.optima_truncated = options.mode == SolveMode::All && Integer(cut_sets.size()) < r.num_optima;
    r.verified = true;
    for (auto& cuts : cut_sets) {
      Codebook cb = detail::make_codebook(cache, std::move(cuts), m);
      VoronoiReport check = detail::check_cells(cache, cb);
      cb.ties = check.ties;
      r.verified = r.verified && check.ok();
      r.optima.push_back(std::move(cb));
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace

std::vector<QuantizationResult> solve_sweep(const DiscreteDistribution& dist, Index n_min, Index n_max,
                                            const SolveOptions& options) {
  require_finite(dist, "solve");
  if (n_min < 1 || n_max < n_min) {
    throw QuantError(ErrorCode::InvalidArgument, "need 1 <= n_min <= n_max");
  }
  return detail::with_cache(dist, 0, options.precision,
                            [&](auto& cache) { return sweep(cache, n_min, n_max, options); });
}

QuantizationResult solve(const DiscreteDistribution& dist, Index n, const SolveOptions& options) {
  return solve_sweep(dist, n, n, options).front();
}

Integer count_optima(const DiscreteDistribution& dist, Index n, Bits precision) {
  SolveOptions options;
  options.precision = precision;
  return solve(dist, n, options).num_optima;
}

Scalar distortion_of(const DiscreteDistribution& dist, std::span<const Scalar> codebook, Bits precision,
                     Index horizon_cap) {
  if (codebook.empty()) throw QuantError(ErrorCode::InvalidArgument, "codebook is empty");
  return detail::with_cache(dist, 64, precision, [&](auto& cache) {
    using T = std::decay_t<decltype(cache.point(1))>;
    std::vector<T> points;
    for (const Scalar& s : codebook) points.push_back(FieldTraits<T>::from(s, cache.precision()));
    std::sort(points.begin(), points.end());
    if (std::adjacent_find(points.begin(), points.end()) != points.end()) {
      throw QuantError(ErrorCode::InvalidArgument, "codebook points must be distinct");
    }
    return Scalar(detail::distortion_t(cache, points, horizon_cap));
  });
}

VoronoiReport check_codebook(const DiscreteDistribution& dist, const Codebook& codebook, Bits precision) {
  Index reach = codebook.cuts.empty() ? 1 : codebook.cuts.back() + 1;
  return detail::with_cache(dist, reach + 1, precision,
                            [&](auto& cache) { return detail::check_cells(cache, codebook); });
}

namespace {

template <class T>
LloydResult lloyd(const MomentCache<T>& cache, std::vector<T> codes, int max_iters) {
  using F = FieldTraits<T>;
  const Index m = *cache.end();
  std::sort(codes.begin(), codes.end());
  if (std::adjacent_find(codes.begin(), codes.end()) != codes.end()) {
    throw QuantError(ErrorCode::InvalidArgument, "initial code points must be distinct");
  }

  // cell ends per code point; ties go to the lower code point
  auto assign = [&](const std::vector<T>& c) {
    std::vector<Index> ends(c.size(), 0);
    std::vector<Index> counts(c.size(), 0);
    std::size_t code = 0;
    for (Index k = 1; k <= m; ++k) {
      const T& x = cache.point(k);
      while (code + 1 < c.size()) {
        T here = x - c[code];
        T next = x - c[code + 1];
        if (next * next < here * here) {
          ++code;
        } else {
          break;
        }
      }
      ++counts[code];
      ends[code] = k;
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (counts[i] == 0) {
        throw QuantError(ErrorCode::EmptyCellCollapse,
                         "code point #" + std::to_string(i + 1) + " has an empty cell");
      }
    }
    return ends;
  };
  auto distortion = [&](const std::vector<T>& c, const std::vector<Index>& ends) {
    T total = F::zero(cache.precision());
    Index first = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      T gap = cache.av(first, ends[i]) - c[i];
      total += cache.er(first, ends[i]) + cache.range_sum(0, first, ends[i]) * gap * gap;
      first = ends[i] + 1;
    }
    return total;
  };

  LloydResult result;
  std::vector<Index> previous;
  for (;;) {
    std::vector<Index> ends = assign(codes);
    T value = distortion(codes, ends);
    result.history.push_back(Scalar(value));
    result.distortion = Scalar(value);
    if (ends == previous) {
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iters) break;
    Index first = 1;
    for (std::size_t i = 0; i < codes.size(); ++i) {
      codes[i] = cache.av(first, ends[i]);
      first = ends[i] + 1;
    }
    ++result.iterations;
    previous = std::move(ends);
  }
  for (const T& c : codes) result.codebook.push_back(Scalar(c));
  return result;
}

}  // namespace

LloydResult lloyd_descent(const DiscreteDistribution& dist, std::span<const Scalar> initial, int max_iters,
                          Bits precision) {
  require_finite(dist, "lloyd_descent");
  if (initial.empty()) throw QuantError(ErrorCode::InvalidArgument, "initial codebook is empty");
  return detail::with_cache(dist, 0, precision, [&](auto& cache) {
    using T = std::decay_t<decltype(cache.point(1))>;
    std::vector<T> codes;
    for (const Scalar& s : initial) codes.push_back(FieldTraits<T>::from(s, cache.precision()));
    return lloyd(cache, std::move(codes), max_iters);
  });
}

}  // namespace nquant
