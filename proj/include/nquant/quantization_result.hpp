#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nquant/scalar.hpp"

namespace nquant {

/// An n-point codebook together with the contiguous partition it induces.
///
/// Cells are listed in atom-index order: cell i covers atoms
/// (cuts[i-1], cuts[i]] with cuts[-1] = 0, and the last cell ends at
/// `last_atom` (or runs to infinity when `last_atom` is empty). `centers[i]` is
/// the code point of cell i. For DyadicReciprocal the index order is the
/// descending point order, so `points()` reverses it.
struct Codebook {
  std::vector<Scalar> centers;
  std::vector<Index> cuts;
  std::optional<Index> last_atom;
  /// Atoms at exactly equal distance from their own and a neighbouring code
  /// point. They are kept in the lower-index cell; the distortion is the same
  /// either way.
  std::vector<Index> ties;

  std::size_t size() const { return centers.size(); }
  bool has_tail() const { return !last_atom.has_value(); }
  /// Code points in strictly increasing order.
  std::vector<Scalar> points() const;
  /// (first, last) atom indices of cell i; last is empty for a tail cell.
  std::pair<Index, std::optional<Index>> cell(std::size_t i) const;
};

struct QuantizationResult {
  Index n = 0;
  Scalar distortion;
  /// Optimal codebooks sorted by cut vector. In single mode only the first.
  std::vector<Codebook> optima;
  /// Number of distinct optimal cut vectors (may exceed optima.size()).
  Integer num_optima{0};
  bool optima_truncated = false;
  bool exact = true;
  Bits precision_bits = kDefaultPrecision;
  /// Atoms tabulated by the tail solver; 0 for finite supports.
  Index horizon = 0;
  /// Every emitted codebook passed the centroid and Voronoi checks.
  bool verified = false;
};

struct VoronoiReport {
  bool positive_mass = true;
  bool centroid = true;
  bool voronoi = true;
  std::vector<Index> ties;

  bool ok() const { return positive_mass && centroid && voronoi; }
};

}  // namespace nquant
