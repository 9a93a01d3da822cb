#pragma once

#include <span>
#include <vector>

#include "nquant/distribution.hpp"
#include "nquant/quantization_result.hpp"

namespace nquant {

enum class SolveMode { Single, All };

struct SolveOptions {
  SolveMode mode = SolveMode::Single;
  /// Working precision for floating distributions; decimal previews otherwise.
  Bits precision = kDefaultPrecision;
  /// Upper bound on codebooks materialised in mode All (the count is exact).
  std::size_t max_optima = 4096;
  /// Infinite families: largest horizon the tail solver may grow to.
  Index horizon_cap = Index{1} << 16;
};

/// Exact optimal n-means of a finite distribution by dynamic programming over
/// contiguous cells. With n >= support size the support itself is returned
/// with zero distortion.
QuantizationResult solve(const DiscreteDistribution& dist, Index n, const SolveOptions& options = {});

/// solve() for every n in [n_min, n_max], sharing one DP table.
std::vector<QuantizationResult> solve_sweep(const DiscreteDistribution& dist, Index n_min, Index n_max,
                                            const SolveOptions& options = {});

/// Number of distinct optimal codebooks for n levels.
Integer count_optima(const DiscreteDistribution& dist, Index n, Bits precision = kDefaultPrecision);

/// V(P; codebook): expected squared distance to the nearest code point.
/// Works for the infinite families too (the far tail goes to the extreme
/// code point). Codebook points must be distinct.
Scalar distortion_of(const DiscreteDistribution& dist, std::span<const Scalar> codebook,
                     Bits precision = kDefaultPrecision, Index horizon_cap = Index{1} << 16);

/// Positive-mass, centroid and Voronoi conditions of a codebook's cells.
VoronoiReport check_codebook(const DiscreteDistribution& dist, const Codebook& codebook,
                             Bits precision = kDefaultPrecision);

struct LloydResult {
  std::vector<Scalar> codebook;
  Scalar distortion;
  int iterations = 0;
  bool converged = false;
  /// Distortion after each assignment step, starting with the initial codebook.
  std::vector<Scalar> history;
};

/// Lloyd iteration (nearest assignment with ties to the lower code point,
/// then centroid update) until the partition stops changing. Finite
/// distributions only. Throws EmptyCellCollapse if a code point loses all
/// its atoms.
LloydResult lloyd_descent(const DiscreteDistribution& dist, std::span<const Scalar> initial,
                          int max_iters = 1000, Bits precision = kDefaultPrecision);

}  // namespace nquant
