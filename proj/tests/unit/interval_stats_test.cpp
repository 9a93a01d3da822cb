#include <gtest/gtest.h>

#include "nquant/errors.hpp"
#include "nquant/interval_stats.hpp"
#include "unit/oracles.hpp"

using namespace nquant;

TEST(IntervalStats, TruncatedHalfAverages) {
  PrefixSumCache c(DiscreteDistribution::geometric_truncated(6, Rational(1, 2)), 0);
  EXPECT_EQ(c.av(1, 2), Scalar(Rational(4, 3)));
  EXPECT_EQ(c.av(3, 6), Scalar(Rational(31, 8)));
  EXPECT_TRUE(c.exact());
}

TEST(IntervalStats, SingleAtomRanges) {
  PrefixSumCache c(DiscreteDistribution::geometric_naturals(), 16);
  for (Index k = 1; k <= 16; ++k) {
    EXPECT_EQ(c.av(k, k), Scalar(Rational(k)));
    EXPECT_EQ(c.er(k, k), Scalar(0));
  }
}

TEST(IntervalStats, NaturalsTail) {
  PrefixSumCache c(DiscreteDistribution::geometric_naturals(), 8);
  EXPECT_EQ(c.av_tail(3), Scalar(4));
  EXPECT_EQ(c.av_tail(1), Scalar(2));
  EXPECT_EQ(c.er_tail(1), Scalar(2));
  EXPECT_EQ(c.av(1, 2), Scalar(Rational(4, 3)));
}

TEST(IntervalStats, ReciprocalVarianceClosedForm) {
  const Bits bits = 256;
  PrefixSumCache c(DiscreteDistribution::dyadic_reciprocal(), 8, bits);
  EXPECT_FALSE(c.exact());
  Real pi = Real::pi(bits);
  Real l2 = Real::log2(bits);
  Real want = (pi * pi - Real(18L, bits) * l2 * l2) / Real(12L, bits);
  EXPECT_LE(abs(c.er_tail(1).to_real(bits) - want), Real::pow2(10 - bits, bits));
  // V_2 = Er[2, inf) = (pi^2 - 12 - 30 log^2 2 + 24 log 2) / 12
  Real v2 = (pi * pi - Real(12L, bits) - Real(30L, bits) * l2 * l2 + Real(24L, bits) * l2) / Real(12L, bits);
  EXPECT_LE(abs(c.er_tail(2).to_real(bits) - v2), Real::pow2(10 - bits, bits));
}

TEST(IntervalStats, LawOfTotalVarianceExact) {
  for (const auto& atoms : {oracle::uniform_six(), oracle::geometric(6, Rational(1, 2)),
                            oracle::geometric(6, Rational(7, 10))}) {
    PrefixSumCache c(oracle::to_distribution(atoms), 0);
    for (Index k = 1; k <= 6; ++k) {
      for (Index l = k + 1; l <= 6; ++l) {
        for (Index j = k; j < l; ++j) {
          Rational left_mass = 0, right_mass = 0;
          for (Index i = k; i <= j; ++i) left_mass += atoms[static_cast<std::size_t>(i - 1)].p;
          for (Index i = j + 1; i <= l; ++i) right_mass += atoms[static_cast<std::size_t>(i - 1)].p;
          Rational mean = c.av(k, l).rational();
          Rational between = left_mass * (c.av(k, j).rational() - mean) * (c.av(k, j).rational() - mean) +
                             right_mass * (c.av(j + 1, l).rational() - mean) * (c.av(j + 1, l).rational() - mean);
          EXPECT_EQ(c.er(k, l).rational(), c.er(k, j).rational() + c.er(j + 1, l).rational() + between);
        }
        EXPECT_EQ(c.er(k, l).rational(), oracle::er(atoms, k, l));
      }
    }
  }
}

TEST(IntervalStats, FloatingVarianceMatchesTwoPass) {
  const Bits bits = 128;
  const Real absolute = Real::pow2(3 - bits, bits);
  // the one-pass formula may shed up to half the bits before the guard switches to two passes
  const Real relative = Real::pow2(2 - bits / 2, bits);
  PrefixSumCache c(DiscreteDistribution::dyadic_reciprocal(), 64, bits);
  for (Index k = 1; k <= 40; k += 3) {
    for (Index l : {k, k + 1, k + 5, k + 20}) {
      Real want = oracle::reciprocal_er(k, l, bits);
      Real gap = abs(c.er(k, l).to_real(bits) - want);
      EXPECT_LE(gap, absolute) << k << "," << l;
      EXPECT_LE(gap, abs(want) * relative) << k << "," << l;
    }
    Real want = oracle::reciprocal_er(k, 0, bits);
    Real gap = abs(c.er_tail(k).to_real(bits) - want);
    EXPECT_LE(gap, absolute) << k;
    EXPECT_LE(gap, abs(want) * relative) << k;
  }
}

TEST(IntervalStats, CancellationGuardDeepInTheTail) {
  // masses near 2^-60000 and points 1/60000, 1/60001: the one-pass formula
  // loses every bit at 64-bit precision
  const Bits bits = 64;
  const Index k = 60000;
  PrefixSumCache c(DiscreteDistribution::dyadic_reciprocal(), k + 2, bits);
  Scalar got = c.er(k, k + 1);
  // two atoms: p q / (p + q) (x - y)^2 with q = p/2, i.e. p/3 (x - y)^2
  const Bits wide = 256;
  Real p = Real::pow2(-k, wide);
  Real gap = Real(1L, wide) / Real(k, wide) - Real(1L, wide) / Real(k + 1, wide);
  Real want = p / Real(3L, wide) * gap * gap;
  ASSERT_GT(got.sign(), 0);
  Real rel = abs(got.to_real(wide) - want) / want;
  EXPECT_LE(rel, Real::pow2(-40, wide));
}

TEST(IntervalStats, AveragesIncreaseAcrossDisjointRanges) {
  std::mt19937 rng(11);
  auto atoms = oracle::random_atoms(rng, 12);
  PrefixSumCache c(oracle::to_distribution(atoms), 0);
  for (Index k = 1; k <= 12; ++k) {
    for (Index l = k; l < 12; ++l) {
      EXPECT_LT(c.av(k, l), c.av(l + 1, 12));
      EXPECT_GE(c.av(k, l).rational(), atoms[static_cast<std::size_t>(k - 1)].x);
      EXPECT_LE(c.av(k, l).rational(), atoms[static_cast<std::size_t>(l - 1)].x);
    }
  }
}

TEST(IntervalStats, InfinitePrefixPlusTailIsOne) {
  PrefixSumCache n(DiscreteDistribution::geometric_naturals(), 30);
  EXPECT_EQ(n.prefix(0, 30) + n.tail(0, 31), Scalar(1));
  EXPECT_EQ(n.prefix(0, 0), Scalar(0));
  PrefixSumCache r(DiscreteDistribution::dyadic_reciprocal(), 30, 128);
  Real total = (r.prefix(0, 30) + r.tail(0, 31)).to_real(128);
  EXPECT_LE(abs(total - Real(1L, 128)), Real::pow2(-120, 128));
}

TEST(IntervalStats, GrowsOnDemand) {
  PrefixSumCache c(DiscreteDistribution::geometric_naturals(), 8);
  c.grow(100);
  EXPECT_GE(c.horizon(), 100);
  EXPECT_EQ(c.av(90, 91), Scalar(Rational(271, 3)));
}

TEST(IntervalStats, EmptyAndBadRanges) {
  PrefixSumCache c(oracle::to_distribution(oracle::uniform_six()), 0);
  EXPECT_THROW(c.av(3, 2), QuantError);
  EXPECT_THROW(c.er(0, 2), QuantError);
  EXPECT_THROW(c.av(5, 7), QuantError);
}

TEST(GlobalMeanVariance, Fixtures) {
  auto [m_nat, v_nat] = global_mean_variance(DiscreteDistribution::geometric_naturals());
  EXPECT_EQ(m_nat, Scalar(2));
  EXPECT_EQ(v_nat, Scalar(2));

  auto [m_u, v_u] = global_mean_variance(oracle::to_distribution(oracle::uniform_six()));
  EXPECT_EQ(m_u, Scalar(Rational(7, 2)));
  EXPECT_EQ(v_u, Scalar(Rational(35, 12)));

  for (Rational x : {Rational(1, 2), Rational(7, 10), Rational(1, 3)}) {
    auto [mean, var] = global_mean_variance(DiscreteDistribution::geometric_truncated(6, x));
    Rational poly = -x * x * x * x * x + 6 * x * x * x * x - 15 * x * x * x + 20 * x * x - 15 * x + 6;
    EXPECT_EQ(mean.rational(), poly);
    EXPECT_EQ(var.rational(), oracle::er(oracle::geometric(6, x), 1, 6));
  }
  EXPECT_EQ(global_mean_variance(DiscreteDistribution::geometric_truncated(6, Rational(1, 2))).first,
            Scalar(Rational(63, 32)));
}
