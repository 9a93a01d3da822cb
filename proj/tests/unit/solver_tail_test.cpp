#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nquant/errors.hpp"
#include "nquant/interval_stats.hpp"
#include "nquant/solver_tail.hpp"
#include "unit/oracles.hpp"

using namespace nquant;

namespace {

SolveOptions opts(SolveMode mode, Bits bits = kDefaultPrecision) {
  SolveOptions o;
  o.mode = mode;
  o.precision = bits;
  return o;
}

std::vector<Index> iota(Index upto) {
  std::vector<Index> v;
  for (Index i = 1; i <= upto; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST(SolveInfinite, ReciprocalTwoMeans) {
  const Bits bits = 256;
  auto r = solve_infinite(DiscreteDistribution::dyadic_reciprocal(), 2, opts(SolveMode::All, bits));
  EXPECT_EQ(r.num_optima, 1);
  EXPECT_EQ(r.optima.front().cuts, (std::vector<Index>{1}));
  EXPECT_FALSE(r.exact);
  Real pi = Real::pi(bits), l2 = Real::log2(bits);
  Real want = (pi * pi - Real(12L, bits) - Real(30L, bits) * l2 * l2 + Real(24L, bits) * l2) / Real(12L, bits);
  EXPECT_LE(abs(r.distortion.to_real(bits) - want), Real::pow2(8 - bits, bits));
  auto pts = r.optima.front().points();
  EXPECT_EQ(pts.back(), Scalar(1));
}

TEST(SolveInfinite, ReciprocalMatchesDirectSummation) {
  const Bits bits = 256;
  auto sweep = solve_infinite_sweep(DiscreteDistribution::dyadic_reciprocal(), 1, 8, opts(SolveMode::All, bits));
  for (const auto& r : sweep) {
    Real want = r.n <= 5 ? oracle::reciprocal_er(r.n, 0, bits)
                         : oracle::reciprocal_er(r.n + 1, 0, bits) + oracle::reciprocal_er(r.n - 1, r.n, bits);
    EXPECT_LE(abs(r.distortion.to_real(bits) - want), want * Real::pow2(16 - bits, bits)) << r.n;
  }
}

TEST(SolveInfinite, ReciprocalSixMeansSwitchesToPair) {
  auto r = solve_infinite(DiscreteDistribution::dyadic_reciprocal(), 6, opts(SolveMode::All));
  EXPECT_EQ(r.optima.front().cuts, (std::vector<Index>{1, 2, 3, 4, 6}));
  auto pts = r.optima.front().points();
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[2], Scalar(Rational(1, 4)));
  EXPECT_EQ(pts[5], Scalar(1));
}

TEST(SolveInfinite, NaturalsSmallN) {
  auto d = DiscreteDistribution::geometric_naturals();
  auto r1 = solve_infinite(d, 1);
  EXPECT_EQ(r1.distortion, Scalar(2));
  EXPECT_EQ(r1.optima.front().points(), std::vector<Scalar>{Scalar(2)});
  auto r2 = solve_infinite(d, 2, opts(SolveMode::All));
  EXPECT_EQ(r2.num_optima, 1);
  EXPECT_EQ(r2.optima.front().points(), (std::vector<Scalar>{Scalar(Rational(4, 3)), Scalar(4)}));
  auto r3 = solve_infinite(d, 3, opts(SolveMode::All));
  EXPECT_EQ(r3.distortion, Scalar(Rational(1, 3)));
  ASSERT_EQ(r3.optima.size(), 2u);
  EXPECT_EQ(r3.optima[0].points(), (std::vector<Scalar>{Scalar(1), Scalar(Rational(7, 3)), Scalar(5)}));
  EXPECT_EQ(r3.optima[1].points(),
            (std::vector<Scalar>{Scalar(Rational(4, 3)), Scalar(Rational(10, 3)), Scalar(6)}));
}

TEST(SolveInfinite, TailCodePointIsTheTailCentroid) {
  for (auto d : {DiscreteDistribution::geometric_naturals(), DiscreteDistribution::geometric_infinite(Rational(3, 4)),
                 DiscreteDistribution::dyadic_reciprocal()}) {
    for (const auto& r : solve_infinite_sweep(d, 1, 9, opts(SolveMode::All))) {
      for (const auto& cb : r.optima) {
        ASSERT_TRUE(cb.has_tail());
        auto [k, last] = cb.cell(cb.size() - 1);
        TailMoments t = tail_moments(d, k);
        Scalar centroid = t.first / t.mass;
        if (centroid.is_exact()) {
          EXPECT_EQ(cb.centers.back(), centroid);
        } else {
          Real gap = abs(cb.centers.back().to_real(256) - centroid.to_real(256));
          EXPECT_LE(gap, abs(centroid.to_real(256)) * Real::pow2(-240, 256));
        }
        EXPECT_TRUE(check_codebook(d, cb).ok());
      }
      EXPECT_TRUE(r.verified);
    }
  }
}

TEST(SolveInfinite, TailBoundaryMidpoints) {
  // the atom before the tail is nearer its own code point, the first tail atom nearer Av[k, inf)
  auto d = DiscreteDistribution::dyadic_reciprocal();
  PrefixSumCache stats(d, 80, 256);
  for (const auto& r : solve_infinite_sweep(d, 2, 12, opts(SolveMode::Single))) {
    const auto& cb = r.optima.front();
    auto [k, last] = cb.cell(cb.size() - 1);
    Scalar tail = cb.centers.back();
    Scalar prev = cb.centers[cb.size() - 2];
    Scalar before = Scalar(Rational(1, static_cast<unsigned long>(k - 1)));
    Scalar first = Scalar(Rational(1, static_cast<unsigned long>(k)));
    auto sq = [](const Scalar& a) { return a * a; };
    EXPECT_LT(sq(before - prev), sq(before - tail)) << r.n;
    EXPECT_LT(sq(first - tail), sq(first - prev)) << r.n;
  }
}

TEST(SolveInfinite, ErrorCurvesDecrease) {
  for (auto d : {DiscreteDistribution::geometric_naturals(), DiscreteDistribution::dyadic_reciprocal(),
                 DiscreteDistribution::geometric_infinite(Rational(7, 10))}) {
    auto sweep = solve_infinite_sweep(d, 1, 30);
    for (std::size_t i = 1; i < sweep.size(); ++i) EXPECT_LT(sweep[i].distortion, sweep[i - 1].distortion);
  }
}

TEST(SolveInfinite, SweepAgreesWithSingleSolves) {
  auto d = DiscreteDistribution::geometric_infinite(Rational(3, 5));
  auto sweep = solve_infinite_sweep(d, 1, 12, opts(SolveMode::All));
  for (const auto& r : sweep) {
    auto single = solve_infinite(d, r.n, opts(SolveMode::All));
    EXPECT_EQ(single.distortion, r.distortion);
    EXPECT_EQ(single.num_optima, r.num_optima);
  }
}

// Finite truncations converge to the infinite solution and share its finite cells.
TEST(SolveInfinite, TruncationConsistency) {
  for (auto d : {DiscreteDistribution::geometric_naturals(), DiscreteDistribution::geometric_infinite(Rational(3, 4))}) {
    for (Index n : {2, 4, 6}) {
      auto inf = solve_infinite(d, n, opts(SolveMode::All));
      Rational previous_gap = -1;
      for (Index m : {20, 40, 80}) {
        std::vector<Scalar> points, masses;
        for (const Atom& a : d.enumerate_prefix(m)) {
          points.push_back(a.point);
          masses.push_back(a.mass);
        }
        auto fin = solve(DiscreteDistribution::finite(points, masses, true), n, opts(SolveMode::All));
        Rational gap = abs(fin.distortion.rational() - inf.distortion.rational());
        if (previous_gap >= 0) EXPECT_LT(gap, previous_gap) << n << " " << m;
        previous_gap = gap;
        if (m >= 40) {
          std::set<std::vector<Index>> a, b;
          for (const auto& cb : inf.optima) a.insert(cb.cuts);
          for (const auto& cb : fin.optima) b.insert(cb.cuts);
          // truncation can break a tie, never create one
          EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end())) << d.describe() << " n=" << n << " m=" << m;
        }
      }
      EXPECT_LT(previous_gap, Rational(1, 1000000));
    }
  }
}

TEST(SolveInfinite, HorizonCap) {
  SolveOptions o;
  o.horizon_cap = 40;
  try {
    solve_infinite(DiscreteDistribution::geometric_naturals(), 10, o);
    FAIL() << "expected HorizonUnstable";
  } catch (const QuantError& e) {
    EXPECT_EQ(e.code(), ErrorCode::HorizonUnstable);
  }
}

TEST(SolveInfinite, HorizonGrowsForSlowTails) {
  // mass (1-x)^(j-1) x with x = 1/200: the optimal tail start for n = 3 lies far beyond n + 64
  auto d = DiscreteDistribution::geometric_infinite(Rational(1, 200));
  auto r = solve_infinite(d, 3);
  auto [k, last] = r.optima.front().cell(2);
  EXPECT_GT(k, 3 + 64 - 8);
  EXPECT_GT(r.horizon, 3 + 64);
  EXPECT_LE(k, r.horizon - 8);
}

TEST(SolveInfinite, QuantizeDispatches) {
  EXPECT_EQ(quantize(DiscreteDistribution::geometric_naturals(), 2).distortion, Scalar(Rational(2, 3)));
  EXPECT_EQ(quantize(DiscreteDistribution::geometric_truncated(6, Rational(1, 2)), 2).distortion,
            Scalar(Rational(341, 768)));
  EXPECT_THROW(solve_infinite(DiscreteDistribution::geometric_truncated(6, Rational(1, 2)), 2), QuantError);
}

TEST(ReciprocalStructure, FirstLevels) {
  StructureReport rep = verify_reciprocal_structure(12, 256);
  ASSERT_EQ(rep.rows.size(), 12u);
  EXPECT_TRUE(rep.all_agree());
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.label, "theorem");
    EXPECT_EQ(row.midpoints.size(), row.n == 1 ? 0u : (row.n <= 5 ? 1u : 2u));
  }
}

TEST(ReciprocalStructure, LabelsBeyondTheProvedRange) {
  StructureReport rep = verify_reciprocal_structure(303, 512, 300);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_EQ(rep.rows[0].label, "theorem");
  EXPECT_EQ(rep.rows[1].label, "remark");
  EXPECT_EQ(rep.rows[2].label, "probe");
  EXPECT_EQ(rep.rows[3].label, "probe");
  EXPECT_TRUE(rep.rows[0].agrees);
  EXPECT_TRUE(rep.rows[1].agrees);
}

TEST(NaturalsStructure, UpToTwenty) {
  StructureReport rep = verify_naturals_structure(20);
  ASSERT_EQ(rep.rows.size(), 20u);
  for (const auto& row : rep.rows) EXPECT_TRUE(row.agrees) << row.n << ": " << row.note;
  EXPECT_EQ(rep.rows[3].distortion, Scalar(Rational(1, 6)));
  EXPECT_EQ(rep.rows[9].distortion, Scalar(Rational(1, 384)));
}

TEST(NaturalsStructure, FourMeansAgainstTruncatedBruteForce) {
  std::vector<oracle::Atom> atoms;
  for (const Atom& a : DiscreteDistribution::geometric_naturals().enumerate_prefix(60)) {
    atoms.push_back({a.point.rational(), a.mass.rational()});
  }
  Rational total = 0;
  for (const auto& a : atoms) total += a.p;
  for (auto& a : atoms) a.p /= total;
  // contiguous splits of 60 atoms into 4 cells: 32509 cut vectors
  oracle::Best best = oracle::contiguous(atoms, 4);
  // the truncated tail favours one of the two infinite optima
  ASSERT_EQ(best.cuts.size(), 1u);
  EXPECT_EQ(*best.cuts.begin(), (std::vector<Index>{1, 2, 4}));
  EXPECT_LT(abs(best.value - Rational(1, 6)), Rational(1, 1000000000));
}
