#pragma once

#include <cstdint>
#include <vector>

#include "nquant/interval_stats.hpp"

namespace nquant::detail {

/// cost(c, j): least total Er of splitting atoms 1..j into c contiguous
/// nonempty cells, with the full set of optimal predecessors kept per state
/// so that every optimal partition can be recovered.
///
/// cost(c, j) = min over p in [c-1, j-1] of cost(c-1, p) + Er[p+1, j].
template <class T>
class ContiguousDp {
 public:
  ContiguousDp(const MomentCache<T>& cache, Index atoms, Index max_cells)
      : atoms_(atoms), max_cells_(max_cells), bits_(cache.precision()) {
    using F = FieldTraits<T>;
    const std::size_t states = static_cast<std::size_t>((max_cells_ + 1) * (atoms_ + 1));
    cost_.assign(states, F::zero(bits_));
    pred_.assign(states, {});
    paths_.assign(states, Integer(0));
    paths_[at(0, 0)] = 1;
    if (max_cells_ == 0) return;

    std::vector<T> row(static_cast<std::size_t>(atoms_), F::zero(bits_));
    std::vector<T> candidate(static_cast<std::size_t>(atoms_), F::zero(bits_));
    for (Index j = 1; j <= atoms_; ++j) {
      for (Index p = 0; p < j; ++p) row[static_cast<std::size_t>(p)] = cache.er(p + 1, j);

      const Index top = std::min(max_cells_, j);
      for (Index c = 1; c <= top; ++c) {
        const std::size_t s = at(c, j);
        if (c == 1) {
          cost_[s] = row[0];
          pred_[s] = {0};
          paths_[s] = 1;
          continue;
        }
        std::size_t best = static_cast<std::size_t>(c - 1);
        for (Index p = c - 1; p < j; ++p) {
          const auto q = static_cast<std::size_t>(p);
          T& v = candidate[q];
          v = cost_[at(c - 1, p)];
          v += row[q];
          if (v < candidate[best]) best = q;
        }
        cost_[s] = candidate[best];
        auto& preds = pred_[s];
        Integer count(0);
        for (Index p = c - 1; p < j; ++p) {
          const auto q = static_cast<std::size_t>(p);
          if (F::tied(candidate[q], candidate[best], bits_)) {
            preds.push_back(static_cast<std::int32_t>(p));
            count += paths_[at(c - 1, p)];
          }
        }
        paths_[s] = count;
      }
    }
  }

  Index atoms() const { return atoms_; }
  Index max_cells() const { return max_cells_; }
  const T& cost(Index cells, Index last) const { return cost_[at(cells, last)]; }
  const Integer& paths(Index cells, Index last) const { return paths_[at(cells, last)]; }

  /// Cut vectors (ends of cells 1..cells-1) of optimal partitions of atoms
  /// 1..last, at most `limit` of them. Unordered.
  std::vector<std::vector<Index>> cut_vectors(Index cells, Index last, std::size_t limit) const {
    std::vector<std::vector<Index>> out;
    std::vector<Index> stack;
    collect(cells, last, limit, stack, out);
    return out;
  }

 private:
  std::size_t at(Index cells, Index last) const {
    return static_cast<std::size_t>(cells * (atoms_ + 1) + last);
  }

  // `suffix` holds the cuts chosen so far, from the right.
  void collect(Index cells, Index last, std::size_t limit, std::vector<Index>& suffix,
               std::vector<std::vector<Index>>& out) const {
    if (out.size() >= limit) return;
    if (cells <= 1) {
      out.emplace_back(suffix.rbegin(), suffix.rend());
      return;
    }
    for (std::int32_t p : pred_[at(cells, last)]) {
      suffix.push_back(p);
      collect(cells - 1, p, limit, suffix, out);
      suffix.pop_back();
      if (out.size() >= limit) return;
    }
  }

  Index atoms_;
  Index max_cells_;
  Bits bits_;
  std::vector<T> cost_;
  std::vector<std::vector<std::int32_t>> pred_;
  std::vector<Integer> paths_;
};

}  // namespace nquant::detail
