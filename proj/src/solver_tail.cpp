#include "nquant/solver_tail.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "detail/backend.hpp"
#include "detail/codebook_tools.hpp"
#include "detail/contiguous_dp.hpp"
#include "nquant/errors.hpp"
#include "nquant/interval_stats.hpp"

namespace nquant {

namespace {

constexpr Index kHorizonMargin = 64;
constexpr Index kHorizonProximity = 8;

template <class T>
std::vector<QuantizationResult> tail_sweep(MomentCache<T>& cache, Index n_min, Index n_max,
                                           const SolveOptions& options) {
  using F = FieldTraits<T>;
  const Bits bits = cache.precision();
  Index horizon = n_max + kHorizonMargin;

  for (;;) {
    if (horizon > options.horizon_cap) {
      throw QuantError(ErrorCode::HorizonUnstable,
                       "optimal tail start did not settle below horizon cap " +
                           std::to_string(options.horizon_cap));
    }
    cache.grow(horizon);
    horizon = cache.horizon();

    detail::ContiguousDp<T> dp(cache, horizon - 1, std::max<Index>(n_max - 1, 0));
    std::vector<T> tail_er(static_cast<std::size_t>(horizon + 1), F::zero(bits));
    for (Index k = 1; k <= horizon; ++k) tail_er[static_cast<std::size_t>(k)] = cache.er_tail(k);

    std::vector<QuantizationResult> results;
    bool stable = true;
    for (Index n = n_min; n <= n_max && stable; ++n) {
      // value of putting the tail cell at [k, inf)
      auto value_at = [&](Index k) {
        if (n == 1) return tail_er[1];
        return T(dp.cost(n - 1, k - 1) + tail_er[static_cast<std::size_t>(k)]);
      };
      const Index k_lo = n;
      const Index k_hi = n == 1 ? 1 : horizon;
      T best = value_at(k_lo);
      for (Index k = k_lo + 1; k <= k_hi; ++k) {
        T v = value_at(k);
        if (v < best) best = std::move(v);
      }
      std::vector<Index> ties;
      for (Index k = k_lo; k <= k_hi; ++k) {
        if (F::tied(value_at(k), best, bits)) ties.push_back(k);
      }
      if (n > 1 && ties.back() > horizon - kHorizonProximity) {
        stable = false;
        break;
      }

      QuantizationResult r;
      r.n = n;
      r.distortion = Scalar(best);
      r.exact = F::exact;
      r.precision_bits = bits;
      r.horizon = horizon;

      const std::size_t limit = options.mode == SolveMode::All ? options.max_optima : 1;
      std::vector<std::vector<Index>> cut_sets;
      for (Index k : ties) {
        if (n == 1) {
          r.num_optima += 1;
          cut_sets.emplace_back();
          continue;
        }
        r.num_optima += dp.paths(n - 1, k - 1);
        if (cut_sets.size() >= limit) continue;
        for (auto& cuts : dp.cut_vectors(n - 1, k - 1, limit - cut_sets.size())) {
          cuts.push_back(k - 1);
          cut_sets.push_back(std::move(cuts));
        }
      }
      std::sort(cut_sets.begin(), cut_sets.end());
      r.optima_truncated = options.mode == SolveMode::All && Integer(cut_sets.size()) < r.num_optima;
      r.verified = true;
      for (auto& cuts : cut_sets) {
        Codebook cb = detail::make_codebook(cache, std::move(cuts), std::nullopt);
        VoronoiReport check = detail::check_cells(cache, cb);
        cb.ties = check.ties;
        r.verified = r.verified && check.ok();
        r.optima.push_back(std::move(cb));
      }
      results.push_back(std::move(r));
    }
    if (stable) return results;
    horizon *= 2;
  }
}

}  // namespace

std::vector<QuantizationResult> solve_infinite_sweep(const DiscreteDistribution& dist, Index n_min,
                                                     Index n_max, const SolveOptions& options) {
  if (dist.is_finite()) {
    throw QuantError(ErrorCode::InvalidArgument, "solve_infinite needs an infinite family, got " +
                                                     dist.describe());
  }
  if (n_min < 1 || n_max < n_min) {
    throw QuantError(ErrorCode::InvalidArgument, "need 1 <= n_min <= n_max");
  }
  return detail::with_cache(dist, n_max + kHorizonMargin, options.precision,
                            [&](auto& cache) { return tail_sweep(cache, n_min, n_max, options); });
}

QuantizationResult solve_infinite(const DiscreteDistribution& dist, Index n, const SolveOptions& options) {
  return solve_infinite_sweep(dist, n, n, options).front();
}

QuantizationResult quantize(const DiscreteDistribution& dist, Index n, const SolveOptions& options) {
  return dist.is_finite() ? solve(dist, n, options) : solve_infinite(dist, n, options);
}

std::vector<QuantizationResult> quantize_sweep(const DiscreteDistribution& dist, Index n_min, Index n_max,
                                               const SolveOptions& options) {
  return dist.is_finite() ? solve_sweep(dist, n_min, n_max, options)
                          : solve_infinite_sweep(dist, n_min, n_max, options);
}

bool StructureReport::all_agree() const {
  return std::all_of(rows.begin(), rows.end(), [](const StructureRow& r) { return r.agrees; });
}

namespace {

std::vector<Index> iota_cuts(Index upto) {
  std::vector<Index> cuts;
  for (Index i = 1; i <= upto; ++i) cuts.push_back(i);
  return cuts;
}

std::set<std::vector<Index>> cut_set(const QuantizationResult& r) {
  std::set<std::vector<Index>> out;
  for (const Codebook& cb : r.optima) out.insert(cb.cuts);
  return out;
}

}  // namespace

StructureReport verify_reciprocal_structure(Index n_max, Bits precision, Index n_min) {
  const DiscreteDistribution dist = DiscreteDistribution::dyadic_reciprocal();
  SolveOptions options;
  options.mode = SolveMode::All;
  options.precision = precision;
  options.max_optima = 16;
  auto results = solve_infinite_sweep(dist, n_min, n_max, options);

  PrefixSumCache stats(dist, n_max + 2, precision);
  const Scalar half = Scalar(Rational(1, 2));
  auto reciprocal = [](Index k) { return Scalar(Rational(1, static_cast<unsigned long>(k))); };
  auto between = [&](const Scalar& lo, const Scalar& mid, const Scalar& hi, std::string text) {
    return MidpointCheck{std::move(text), lo < mid && mid < hi};
  };

  StructureReport report;
  for (const QuantizationResult& r : results) {
    const Index n = r.n;
    StructureRow row;
    row.n = n;
    row.label = n <= 300 ? "theorem" : (n == 301 ? "remark" : "probe");
    row.distortion = r.distortion;
    row.num_optima = r.num_optima;

    const bool paired = n >= 6;
    std::vector<Index> expected = paired ? iota_cuts(n - 2) : iota_cuts(n - 1);
    if (paired) expected.push_back(n);
    Scalar formula = paired ? stats.er_tail(n + 1) + stats.er(n - 1, n) : stats.er_tail(n);

    if (paired) {
      Scalar tail_av = stats.av_tail(n + 1);
      Scalar pair_av = stats.av(n - 1, n);
      row.midpoints.push_back(between(reciprocal(n + 1), half * (tail_av + pair_av), reciprocal(n),
                                      "1/(n+1) < (Av[n+1,inf) + Av[n-1,n])/2 < 1/n"));
      row.midpoints.push_back(between(reciprocal(n - 1), half * (pair_av + reciprocal(n - 2)),
                                      reciprocal(n - 2), "1/(n-1) < (Av[n-1,n] + 1/(n-2))/2 < 1/(n-2)"));
    } else if (n >= 2) {
      row.midpoints.push_back(between(reciprocal(n), half * (stats.av_tail(n) + reciprocal(n - 1)),
                                      reciprocal(n - 1), "1/n < (Av[n,inf) + 1/(n-1))/2 < 1/(n-1)"));
    }

    const bool shape = r.num_optima == 1 && r.optima.size() == 1 && r.optima.front().cuts == expected;
    const bool value = FieldTraits<Real>::tied(r.distortion.to_real(precision), formula.to_real(precision),
                                               precision);
    const bool midpoints = std::all_of(row.midpoints.begin(), row.midpoints.end(),
                                       [](const MidpointCheck& c) { return c.holds; });
    row.agrees = shape && value && midpoints && r.verified;
    if (!shape) row.note = "optimal structure differs from the expected shape";
    else if (!value) row.note = "distortion differs from the Er formula";
    else if (!midpoints) row.note = "midpoint inequality violated";
    report.rows.push_back(std::move(row));
  }
  return report;
}

StructureReport verify_naturals_structure(Index n_max) {
  const DiscreteDistribution dist = DiscreteDistribution::geometric_naturals();
  SolveOptions options;
  options.mode = SolveMode::All;
  options.max_optima = 16;
  auto results = solve_infinite_sweep(dist, 1, n_max, options);

  StructureReport report;
  for (const QuantizationResult& r : results) {
    const Index n = r.n;
    StructureRow row;
    row.n = n;
    row.label = "theorem";
    row.distortion = r.distortion;
    row.num_optima = r.num_optima;

    Rational expected_value;
    std::set<std::vector<Index>> expected_cuts;
    switch (n) {
      case 1:
        expected_value = 2;
        expected_cuts = {{}};
        break;
      case 2:
        expected_value = Rational(2, 3);
        expected_cuts = {{2}};
        break;
      case 3:
        expected_value = Rational(1, 3);
        expected_cuts = {{1, 3}, {2, 4}};
        break;
      default: {
        Integer pow;
        mpz_ui_pow_ui(pow.get_mpz_t(), 2, static_cast<unsigned long>(n - 3));
        expected_value = Rational(Integer(1), Integer(3 * pow));
        std::vector<Index> single = iota_cuts(n - 2);
        single.push_back(n);
        std::vector<Index> double_pair = iota_cuts(n - 3);
        double_pair.push_back(n - 1);
        double_pair.push_back(n + 1);
        expected_cuts = {single, double_pair};
        break;
      }
    }

    bool prefix_ok = true;
    for (const Codebook& cb : r.optima) {
      std::vector<Scalar> points = cb.points();
      for (Index i = 1; i + 3 <= n; ++i) {
        if (std::find(points.begin(), points.end(), Scalar(Rational(i))) == points.end()) prefix_ok = false;
      }
    }
    const bool value = r.distortion.is_exact() && r.distortion.rational() == expected_value;
    const bool shape = r.num_optima == Integer(expected_cuts.size()) && cut_set(r) == expected_cuts;
    row.agrees = value && shape && prefix_ok && r.verified;
    MidpointCheck prefix{"optima contain 1..n-3", prefix_ok};
    row.midpoints.push_back(prefix);
    if (!value) row.note = "distortion " + r.distortion.to_string() + " != " + rational_to_string(expected_value);
    else if (!shape) row.note = "optimal cut vectors differ from the two expected structures";
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace nquant
