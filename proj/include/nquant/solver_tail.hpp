#pragma once

#include <string>
#include <vector>

#include "nquant/solver_finite.hpp"

namespace nquant {

/// Optimal n-means for an infinite family: n-1 finite contiguous cells plus a
/// tail cell [k, inf) whose code point is M1(k)/M0(k). The prefix horizon
/// starts at n + 64 and doubles while an optimal k lies within 8 atoms of it.
/// Throws HorizonUnstable past `options.horizon_cap`.
QuantizationResult solve_infinite(const DiscreteDistribution& dist, Index n,
                                  const SolveOptions& options = {});

/// solve_infinite() for every n in [n_min, n_max] from one DP table.
std::vector<QuantizationResult> solve_infinite_sweep(const DiscreteDistribution& dist, Index n_min,
                                                     Index n_max, const SolveOptions& options = {});

/// Dispatches to solve() or solve_infinite().
QuantizationResult quantize(const DiscreteDistribution& dist, Index n, const SolveOptions& options = {});
std::vector<QuantizationResult> quantize_sweep(const DiscreteDistribution& dist, Index n_min, Index n_max,
                                               const SolveOptions& options = {});

struct MidpointCheck {
  std::string description;
  bool holds = false;
};

struct StructureRow {
  Index n = 0;
  /// "theorem", "remark" (claimed for n = 301 without proof details) or
  /// "probe" (open question, numerical evidence only).
  std::string label;
  bool agrees = false;
  Scalar distortion;
  Integer num_optima{0};
  std::vector<MidpointCheck> midpoints;
  std::string note;
};

struct StructureReport {
  std::vector<StructureRow> rows;
  bool all_agree() const;
};

/// DyadicReciprocal: for n <= 5 the optimum is {Av[n,inf), 1/(n-1), ..., 1};
/// from n = 6 on it is {Av[n+1,inf), Av[n-1,n], 1/(n-2), ..., 1}. Checks the
/// solver against that shape and the separating midpoint inequalities.
StructureReport verify_reciprocal_structure(Index n_max, Bits precision = 512, Index n_min = 1);

/// GeometricNaturals: V1 = 2, V2 = 2/3, V3 = 1/3 (two optima), and for n >= 4
/// exactly the two optima {1..n-2, Av[n-1,n], Av[n+1,inf)} and
/// {1..n-3, Av[n-2,n-1], Av[n,n+1], Av[n+2,inf)} with V_n = 2^(3-n)/3.
StructureReport verify_naturals_structure(Index n_max);

}  // namespace nquant
