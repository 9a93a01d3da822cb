#include <gtest/gtest.h>

#include "nquant/distribution.hpp"
#include "nquant/errors.hpp"
#include "unit/oracles.hpp"

using namespace nquant;

namespace {

std::vector<Scalar> scalars(std::initializer_list<const char*> values) {
  std::vector<Scalar> out;
  for (const char* v : values) out.push_back(Scalar::parse(v));
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const QuantError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no QuantError thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(MakeFinite, UniformSix) {
  auto d = DiscreteDistribution::finite(scalars({"1", "2", "3", "4", "5", "6"}),
                                        scalars({"1/6", "1/6", "1/6", "1/6", "1/6", "1/6"}));
  EXPECT_TRUE(d.is_finite());
  EXPECT_EQ(*d.size(), 6);
  EXPECT_TRUE(d.exact());
}

TEST(MakeFinite, SortsAtoms) {
  auto d = DiscreteDistribution::finite(scalars({"3", "1", "2"}), scalars({"1/2", "1/4", "1/4"}));
  EXPECT_EQ(d.atom(1).point, Scalar(1));
  EXPECT_EQ(d.atom(3).mass, Scalar(Rational(1, 2)));
}

TEST(MakeFinite, SingleAtom) {
  auto d = DiscreteDistribution::finite(scalars({"0"}), scalars({"1"}));
  EXPECT_EQ(*d.size(), 1);
}

TEST(MakeFinite, Validation) {
  EXPECT_EQ(code_of([] { DiscreteDistribution::finite(scalars({"1", "1"}), scalars({"1/2", "1/2"})); }),
            ErrorCode::DuplicatePoint);
  EXPECT_EQ(code_of([] { DiscreteDistribution::finite(scalars({"1", "2"}), scalars({"1", "0"})); }),
            ErrorCode::NonPositiveMass);
  EXPECT_EQ(code_of([] { DiscreteDistribution::finite(scalars({"1", "2"}), scalars({"1/2", "1/3"})); }),
            ErrorCode::MassSumMismatch);
  auto normalized = DiscreteDistribution::finite(scalars({"1", "2"}), scalars({"1", "3"}), true);
  EXPECT_EQ(normalized.atom(2).mass, Scalar(Rational(3, 4)));
}

TEST(MakeFinite, FloatingMassesWithinTolerance) {
  std::vector<Scalar> masses;
  for (int i = 0; i < 3; ++i) masses.emplace_back(Real(1L, 128) / Real(3L, 128));
  auto d = DiscreteDistribution::finite(scalars({"1", "2", "3"}), masses);
  EXPECT_FALSE(d.exact());
  EXPECT_EQ(*d.data_precision(), 128);
}

TEST(TailMoments, NaturalsAtThree) {
  auto d = DiscreteDistribution::geometric_naturals();
  TailMoments t = tail_moments(d, 3);
  EXPECT_EQ(t.mass, Scalar(Rational(1, 4)));
  // sum_{n>=3} n 2^-n = 1, so Av[3, inf) = 4
  EXPECT_EQ(t.first, Scalar(1));
  EXPECT_EQ(t.second, Scalar(Rational(9, 2)));
}

TEST(TailMoments, NaturalsClosedFormMatchesDirectSums) {
  auto d = DiscreteDistribution::geometric_naturals();
  const Bits bits = 256;
  for (Index k : {1, 2, 5, 17, 40}) {
    Real m0(0L, bits), m1(0L, bits), m2(0L, bits);
    for (Index n = k; n < k + 500; ++n) {
      Real p = Real::pow2(-n, bits);
      m0 += p;
      m1 += p * Real(n, bits);
      m2 += p * Real(n * n, bits);
    }
    TailMoments t = tail_moments(d, k);
    Real tol = Real::pow2(-200, bits) * Real(k * k + 1, bits);
    EXPECT_LE(abs(t.mass.to_real(bits) - m0), tol) << k;
    EXPECT_LE(abs(t.first.to_real(bits) - m1), tol) << k;
    EXPECT_LE(abs(t.second.to_real(bits) - m2), tol) << k;
  }
}

TEST(TailMoments, GeometricInfiniteClosedFormMatchesDirectSums) {
  const Rational x(7, 10);
  auto d = DiscreteDistribution::geometric_infinite(x);
  const Bits bits = 256;
  for (Index k : {1, 2, 6, 20}) {
    Real m0(0L, bits), m1(0L, bits), m2(0L, bits);
    Rational p = x;
    for (Index j = 1; j < k; ++j) p *= Rational(3, 10);
    for (Index j = k; j < k + 600; ++j) {
      Real pr(p, bits);
      m0 += pr;
      m1 += pr * Real(j, bits);
      m2 += pr * Real(j * j, bits);
      p *= Rational(3, 10);
    }
    TailMoments t = tail_moments(d, k);
    ASSERT_TRUE(t.mass.is_exact());
    Real tol = Real::pow2(-200, bits);
    EXPECT_LE(abs(t.mass.to_real(bits) - m0), tol) << k;
    EXPECT_LE(abs(t.first.to_real(bits) - m1), tol) << k;
    EXPECT_LE(abs(t.second.to_real(bits) - m2), tol) << k;
  }
}

TEST(TailMoments, ReciprocalFirstMomentIsLog2) {
  auto d = DiscreteDistribution::dyadic_reciprocal();
  for (Bits bits : {64L, 256L, 512L}) {
    TailMoments t = tail_moments(d, 1, bits);
    EXPECT_LE(abs(t.first.to_real(bits) - Real::log2(bits)), Real::pow2(2 - bits, bits)) << bits;
    EXPECT_EQ(t.mass.to_real(bits), Real(1L, bits));
  }
}

TEST(TailMoments, MassDifferencesAreAtomMasses) {
  for (auto d : {DiscreteDistribution::geometric_naturals(), DiscreteDistribution::geometric_infinite(Rational(2, 3)),
                 DiscreteDistribution::geometric_truncated(9, Rational(1, 3))}) {
    for (Index k = 1; k < 9; ++k) {
      EXPECT_EQ(tail_moments(d, k).mass - tail_moments(d, k + 1).mass, d.atom(k).mass) << d.describe() << k;
    }
  }
  auto r = DiscreteDistribution::dyadic_reciprocal();
  const Bits bits = 200;
  for (Index k = 1; k < 30; ++k) {
    Real diff = tail_moments(r, k, bits).mass.to_real(bits) - tail_moments(r, k + 1, bits).mass.to_real(bits);
    EXPECT_LE(abs(diff - r.atom(k).mass.to_real(bits)), Real::pow2(2 - bits, bits)) << k;
  }
}

TEST(TailMoments, FiniteSummationOrderIndependent) {
  std::mt19937 rng(7);
  auto atoms = oracle::random_atoms(rng, 10);
  auto d = oracle::to_distribution(atoms);
  for (Index k = 1; k <= 10; ++k) {
    Rational m0 = 0, m1 = 0, m2 = 0;
    for (Index j = 10; j >= k; --j) {
      const auto& a = atoms[static_cast<std::size_t>(j - 1)];
      m0 += a.p;
      m1 += a.p * a.x;
      m2 += a.p * a.x * a.x;
    }
    TailMoments t = tail_moments(d, k);
    EXPECT_EQ(t.mass.rational(), m0);
    EXPECT_EQ(t.first.rational(), m1);
    EXPECT_EQ(t.second.rational(), m2);
  }
  EXPECT_EQ(code_of([&] { tail_moments(d, 11); }), ErrorCode::IndexOutOfRange);
}

TEST(TailMoments, UniformSixFromOne) {
  auto d = oracle::to_distribution(oracle::uniform_six());
  TailMoments t = tail_moments(d, 1);
  EXPECT_EQ(t.mass, Scalar(1));
  EXPECT_EQ(t.first, Scalar(Rational(7, 2)));
  EXPECT_EQ(t.second, Scalar(Rational(91, 6)));
}

TEST(EnumeratePrefix, Families) {
  auto t = DiscreteDistribution::geometric_truncated(6, Rational(1, 2)).enumerate_prefix(6);
  std::vector<Rational> want = {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16), Rational(1, 32),
                                Rational(1, 32)};
  ASSERT_EQ(t.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(t[i].mass.rational(), want[i]);

  auto g = DiscreteDistribution::geometric_infinite(Rational(7, 10)).enumerate_prefix(2);
  EXPECT_EQ(g[0].point, Scalar(1));
  EXPECT_EQ(g[0].mass, Scalar(Rational(7, 10)));
  EXPECT_EQ(g[1].point, Scalar(2));
  EXPECT_EQ(g[1].mass, Scalar(Rational(21, 100)));

  auto r = DiscreteDistribution::dyadic_reciprocal().enumerate_prefix(3);
  EXPECT_EQ(r[0].point, Scalar(1));
  EXPECT_EQ(r[1].point, Scalar(Rational(1, 2)));
  EXPECT_EQ(r[2].point, Scalar(Rational(1, 3)));
  EXPECT_EQ(r[2].mass, Scalar(Rational(1, 8)));

  EXPECT_EQ(code_of([] { DiscreteDistribution::geometric_truncated(6, Rational(1, 2)).enumerate_prefix(7); }),
            ErrorCode::IndexOutOfRange);
}

TEST(Families, ParameterChecks) {
  EXPECT_THROW(DiscreteDistribution::geometric_truncated(2, Rational(1, 2)), QuantError);
  EXPECT_THROW(DiscreteDistribution::geometric_infinite(Rational(1)), QuantError);
  EXPECT_THROW(DiscreteDistribution::geometric_infinite(Rational(0)), QuantError);
  EXPECT_FALSE(DiscreteDistribution::dyadic_reciprocal().ascending());
  EXPECT_FALSE(DiscreteDistribution::dyadic_reciprocal().exact());
  EXPECT_TRUE(DiscreteDistribution::geometric_naturals().exact());
}
