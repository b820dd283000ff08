#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riesz/errors.hpp"
#include "riesz/interval_sets.hpp"
#include "riesz/monotone.hpp"

using namespace riesz;

namespace {

const ClosedInterval kUnit{0, 1};

MonotoneFn half_identity_plus_atom() {
  return MonotoneFn::make(kUnit, {{0, 0}, {1, 0.5}}, {{0.5, 0.5}});
}

void expect_limits(const MonotoneFn& a, double x, double left, double value, double right) {
  const Limits l = a.eval_with_limits(x);
  EXPECT_DOUBLE_EQ(l.left, left) << "x = " << x;
  EXPECT_DOUBLE_EQ(l.value, value) << "x = " << x;
  EXPECT_DOUBLE_EQ(l.right, right) << "x = " << x;
}

}  // namespace

TEST(EvalWithLimits, ContinuousPoint) { expect_limits(MonotoneFn::identity(kUnit), 0.5, 0.5, 0.5, 0.5); }

TEST(EvalWithLimits, RightContinuousAtAnInteriorAtom) {
  expect_limits(MonotoneFn::step(kUnit, 0.5, 2.0), 0.5, 0.0, 2.0, 2.0);
}

TEST(EvalWithLimits, AtomAtTheLeftEndpointIsNotRightContinuous) {
  const auto a = MonotoneFn::step(kUnit, 0.0, 1.0);
  expect_limits(a, 0.0, 0.0, 0.0, 1.0);
  EXPECT_EQ(a(1e-300), 1.0);
}

TEST(EvalWithLimits, BoundaryLimitsAreTheEndpointValues) {
  const auto a = MonotoneFn::make(kUnit, {{0, 0}, {1, 1}}, {{1.0, 0.25}});
  expect_limits(a, 1.0, 1.0, 1.25, 1.25);
  expect_limits(MonotoneFn::identity(kUnit), 0.0, 0.0, 0.0, 0.0);
}

TEST(EvalWithLimits, RejectsPointsOutsideTheHull) {
  EXPECT_THROW(MonotoneFn::identity(kUnit)(1.5), DomainError);
  EXPECT_THROW(MonotoneFn::identity(kUnit).eval_with_limits(-0.1), DomainError);
}

TEST(Make, RejectsMalformedInput) {
  EXPECT_THROW(MonotoneFn::make(kUnit, {{0, 1}, {1, 0}}), DomainError);
  EXPECT_THROW(MonotoneFn::make(kUnit, {{0, 0}, {0, 1}}), DomainError);
  EXPECT_THROW(MonotoneFn::make(kUnit, {}, {{0.5, 0.0}}), DomainError);
  EXPECT_THROW(MonotoneFn::make(kUnit, {}, {{0.5, 1.0}, {0.25, 1.0}}), DomainError);
  EXPECT_THROW(MonotoneFn::make(kUnit, {}, {{1.5, 1.0}}), DomainError);
  EXPECT_THROW(MonotoneFn::make({1, 1}, {}), DomainError);
}

TEST(Normalize, SubtractsTheValueAtA) {
  const auto a = MonotoneFn::make(kUnit, {{0, 5}, {1, 6}});
  const auto n = normalize(a);
  for (double x : {0.0, 0.125, 0.5, 1.0}) EXPECT_DOUBLE_EQ(n(x), x);
  EXPECT_TRUE(n.is_normalized());
  EXPECT_FALSE(a.is_normalized());
}

TEST(Normalize, RemovesTheOffset) {
  const auto a = MonotoneFn::make(kUnit, {{0, 0}, {1, 1}}, {}, {}, 3.0);
  EXPECT_DOUBLE_EQ(a(0.5), 3.5);
  EXPECT_DOUBLE_EQ(normalize(a)(0.5), 0.5);
}

TEST(Normalize, IsIdempotentFieldForField) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_integrator(rng, {-1, 3}).build();
    const auto once = normalize(a);
    const auto twice = normalize(once);
    EXPECT_EQ(once.knots(), twice.knots());
    EXPECT_EQ(once.atoms(), twice.atoms());
    EXPECT_EQ(once.offset(), twice.offset());
    EXPECT_EQ(once.hull(), twice.hull());
  }
}

TEST(Normalize, LeftContinuousJumpBecomesRightContinuous) {
  const auto a = MonotoneFn::make(kUnit, {{0, 0}, {1, 1}}, {{0.5, 1.0, AtomSide::left}});
  EXPECT_DOUBLE_EQ(a(0.5), 0.5);
  const auto n = normalize(a);
  const Limits at = n.eval_with_limits(0.5);
  EXPECT_DOUBLE_EQ(at.value, at.right);
  EXPECT_DOUBLE_EQ(at.value, 1.5);

  // One-sided limits against brute-force evaluation at x ± 10^-k.
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const Limits l = n.eval_with_limits(x);
    double left = n(std::max(0.0, x - 1e-12)), right = n(std::min(1.0, x + 1e-12));
    if (x == 0.0) left = l.value;
    if (x == 1.0) right = l.value;
    EXPECT_NEAR(l.left, left, 1e-11);
    EXPECT_NEAR(l.right, right, 1e-11);
    EXPECT_EQ(l.value, l.right) << "normalized α must be right-continuous inside (a, b]";
    if (i > 0 && i < 1000 && i != 500) EXPECT_DOUBLE_EQ(n(x), a(x));
  }
}

TEST(TotalVariation, SquareOnZeroTwo) {
  const auto density = DensityTerm::make([](double x) { return 2.0 * x; }, {0, 2});
  const auto a = MonotoneFn::make({0, 2}, {}, {}, {density});
  EXPECT_NEAR(total_variation(a).value, 4.0, 1e-12);
  EXPECT_NEAR(a(1.0), 1.0, 1e-12);
  EXPECT_NEAR(a(1.5), 2.25, 1e-12);
}

TEST(TotalVariation, HalfIdentityPlusAtom) { EXPECT_DOUBLE_EQ(total_variation(half_identity_plus_atom()).value, 1.0); }

TEST(TotalVariation, DevilStaircaseHasUnitVariation) {
  EXPECT_DOUBLE_EQ(total_variation(devil_staircase(8, kUnit)).value, 1.0);
}

TEST(TotalVariation, IncludesAnAtomAtA) {
  EXPECT_DOUBLE_EQ(total_variation(MonotoneFn::step(kUnit, 0.0, 3.0)).value, 3.0);
}

TEST(TotalVariation, MatchesEndpointDifferenceExactly) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const auto raw = oracle::random_integrator(rng, {-2, 2});
    const auto a = raw.build();
    const double v = total_variation(a).value;
    EXPECT_EQ(v, a(2.0) - a(-2.0));
    EXPECT_NEAR(v, raw.variation(), 1e-12);
  }
}

TEST(DevilStaircase, DepthZeroIsTheIdentity) {
  const auto a = devil_staircase(0, kUnit);
  for (double x : {0.0, 0.3, 0.7, 1.0}) EXPECT_DOUBLE_EQ(a(x), x);
}

TEST(DevilStaircase, DepthOneShape) {
  const auto a = devil_staircase(1, kUnit);
  EXPECT_DOUBLE_EQ(a(1.0 / 6.0), 0.25);
  EXPECT_DOUBLE_EQ(a(1.0 / 3.0), 0.5);
  EXPECT_DOUBLE_EQ(a(0.5), 0.5);
  EXPECT_DOUBLE_EQ(a(2.0 / 3.0), 0.5);
  EXPECT_DOUBLE_EQ(a(5.0 / 6.0), 0.75);
  EXPECT_DOUBLE_EQ(a(1.0), 1.0);
}

TEST(DevilStaircase, ConstantOnAllGapsAtDepthEight) {
  const auto a = devil_staircase(8, kUnit);
  const auto g = gaps(cantor_approx(8, kUnit));
  ASSERT_EQ(g.gaps.size(), 255u);
  for (const auto& gap : g.gaps) EXPECT_TRUE(is_constant_on(a, gap.lo, gap.hi)) << to_string(gap);
}

TEST(DevilStaircase, MatchesTheTernaryDefinitionAtPartEnds) {
  // At the left end of the i-th part the Cantor function equals i / 2^n.
  const int n = 6;
  const auto a = devil_staircase(n, kUnit);
  const auto k = cantor_approx(n, kUnit);
  for (std::size_t i = 0; i < k.parts().size(); ++i) {
    EXPECT_NEAR(a(k.parts()[i].lo), static_cast<double>(i) / 64.0, 1e-15);
    EXPECT_NEAR(a(k.parts()[i].hi), static_cast<double>(i + 1) / 64.0, 1e-15);
  }
}

TEST(IsConstantOn, Examples) {
  EXPECT_TRUE(is_constant_on(devil_staircase(2, kUnit), 1.0 / 3.0, 2.0 / 3.0));
  EXPECT_FALSE(is_constant_on(MonotoneFn::identity(kUnit), 0.1, 0.2));
  const auto atom = MonotoneFn::step(kUnit, 0.5, 1.0);
  EXPECT_FALSE(is_constant_on(atom, 0.4, 0.6));
  EXPECT_TRUE(is_constant_on(atom, 0.6, 0.8));
  EXPECT_TRUE(is_constant_on(atom, 0.5, 0.8)) << "an atom at the open end is outside (u, v)";
}

TEST(IsConstantOn, RejectsMalformedIntervals) {
  EXPECT_THROW(is_constant_on(MonotoneFn::identity(kUnit), 0.5, 0.5), DomainError);
  EXPECT_THROW(is_constant_on(MonotoneFn::identity(kUnit), 0.5, 1.5), DomainError);
}

TEST(Properties, MonotoneOnRandomPairs) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> at(0.0, 1.0);
  for (int f = 0; f < 10; ++f) {
    const auto a = oracle::random_integrator(rng, kUnit).build();
    for (int i = 0; i < 1000; ++i) {
      double x = at(rng), y = at(rng);
      if (x > y) std::swap(x, y);
      EXPECT_LE(a(x), a(y));
    }
  }
}

TEST(Properties, ValueMatchesTheDefinition) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> at(0.0, 1.0);
  for (int f = 0; f < 50; ++f) {
    const auto raw = oracle::random_integrator(rng, kUnit);
    const auto a = raw.build();
    for (int i = 0; i < 100; ++i) {
      const double x = at(rng);
      EXPECT_NEAR(a(x), raw.value(x), 1e-12);
    }
    for (const auto& atom : raw.atoms) EXPECT_NEAR(a(atom.at), raw.value(atom.at), 1e-12);
  }
}

TEST(Properties, JumpAtXEqualsTheAtomWeight) {
  std::mt19937_64 rng(25);
  for (int f = 0; f < 100; ++f) {
    const auto raw = oracle::random_integrator(rng, kUnit);
    const auto a = raw.build();
    for (const auto& atom : raw.atoms) {
      const Limits l = a.eval_with_limits(atom.at);
      EXPECT_LE(l.left, l.value);
      EXPECT_LE(l.value, l.right);
      if (atom.at > 0.0 && atom.at < 1.0) EXPECT_NEAR(l.right - l.left, atom.weight, 1e-12);
    }
    const Limits mid = a.eval_with_limits(0.123456789);
    EXPECT_EQ(mid.left, mid.right);
  }
}

TEST(Combine, AddsPointwise) {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> at(0.0, 1.0);
  for (int f = 0; f < 50; ++f) {
    const auto r1 = oracle::random_integrator(rng, kUnit);
    const auto r2 = oracle::random_integrator(rng, kUnit);
    const auto sum = combine(r1.build(), r2.build());
    EXPECT_TRUE(sum.is_normalized());
    for (int i = 0; i < 100; ++i) {
      const double x = at(rng);
      EXPECT_NEAR(sum(x), r1.value(x) + r2.value(x), 1e-12);
    }
    EXPECT_NEAR(total_variation(sum).value, r1.variation() + r2.variation(), 1e-12);
  }
}
