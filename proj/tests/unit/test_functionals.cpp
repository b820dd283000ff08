#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riesz/errors.hpp"
#include "riesz/expr.hpp"
#include "riesz/functionals.hpp"
#include "riesz/stieltjes.hpp"

using namespace riesz;

namespace {

const ClosedInterval kUnit{0, 1};
const CompactSet kUnitK = make_compact({kUnit}, kUnit);

PositiveFunctional dirac(double at, double weight = 1.0, const CompactSet& k = kUnitK) {
  return PositiveFunctional::make(k, {DiracCombo{{{at, weight}}}});
}

PositiveFunctional density_2x() {
  return PositiveFunctional::make(kUnitK, {DensityPart::make([](double x) { return 2 * x; }, {kUnit})});
}

PositiveFunctional third_plus_density() {
  return PositiveFunctional::make(
      kUnitK, {DiracCombo{{{1.0 / 3.0, 1.0}}}, DensityPart::make([](double) { return 1.0; }, {{2.0 / 3.0, 1.0}})});
}

const RealFn kOne = [](double) { return 1.0; };

}  // namespace

TEST(Apply, Dirac) { EXPECT_DOUBLE_EQ(apply(dirac(0.3), [](double x) { return x * x; }, 1e-10), 0.09); }

TEST(Apply, Density) { EXPECT_NEAR(apply(density_2x(), kOne, 1e-10), 1.0, 1e-12); }

TEST(Apply, DiracPlusDensity) { EXPECT_NEAR(apply(third_plus_density(), kOne, 1e-10), 4.0 / 3.0, 1e-12); }

TEST(Apply, OnlyEvaluatesOnK) {
  const auto k = make_compact({{0, 0.25}, {0.75, 1}}, kUnit);
  const auto ell = PositiveFunctional::make(
      k, {DiracCombo{{{0.1, 1.0}}}, DensityPart::make([](double) { return 1.0; }, {{0.75, 1}}),
          MeasureBacked{LSMeasure(MonotoneFn::make(kUnit, {{0, 0}, {0.25, 1}, {0.75, 1}, {1, 2}}))}});
  const RealFn guarded = [&](double x) {
    if (!k.contains(x)) throw std::logic_error("evaluated off K");
    return x;
  };
  EXPECT_NO_THROW(apply(ell, guarded, 1e-10));
  // 0.1 + ∫_{3/4}^1 x dx + (∫_0^{1/4} 4x dx + ∫_{3/4}^1 4x dx)
  EXPECT_NEAR(apply(ell, guarded, 1e-10), 0.1 + 7.0 / 32.0 + 4.0 * (1.0 / 32.0 + 7.0 / 32.0), 1e-10);
}

TEST(Apply, IsPositiveOnNonnegativeProbes) {
  std::mt19937_64 rng(61);
  const auto ell = third_plus_density();
  for (int i = 0; i < 100; ++i) {
    const expr::Expression f(expr::random_probe(rng, kUnit));
    EXPECT_GE(apply(ell, [&](double x) { return std::abs(f(x)); }, 1e-10), -1e-10);
  }
}

TEST(Apply, RejectsNonPositiveTolerance) { EXPECT_THROW(apply(dirac(0.3), kOne, 0.0), DomainError); }

TEST(Norm, Examples) {
  EXPECT_EQ(norm(dirac(0.3)), 1.0);
  EXPECT_NEAR(norm(density_2x()), 1.0, 1e-12);
  EXPECT_EQ(norm(dirac(0.0, 3.0)), 3.0);
}

TEST(Norm, EqualsApplyOnOne) {
  EXPECT_NEAR(norm(third_plus_density()), apply(third_plus_density(), kOne, 1e-12), 1e-12);
}

TEST(Make, RejectsInvalidParts) {
  const auto k = make_compact({{0, 0.25}, {0.75, 1}}, kUnit);
  try {
    dirac(0.5, 1.0, k);
    FAIL() << "Dirac point outside K accepted";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(dirac(0.1, 0.0, k), DomainError);
  EXPECT_THROW(dirac(0.1, -1.0, k), DomainError);
  EXPECT_THROW(PositiveFunctional::make(k, {DensityPart::make(kOne, {{0.2, 0.8}})}), DomainError);
  EXPECT_THROW(PositiveFunctional::make(k, {MeasureBacked{LSMeasure(MonotoneFn::identity(kUnit))}}), DomainError);
  EXPECT_THROW(PositiveFunctional::make(k, {MeasureBacked{LSMeasure(MonotoneFn::identity({0, 2}))}}), DomainError);
  EXPECT_THROW(DensityPart::make([](double x) { return x - 0.5; }, {kUnit}), DomainError);
}

TEST(Represent, Dirac) {
  const auto rep = represent(dirac(0.3));
  EXPECT_EQ(rep.alpha(0.29), 0.0);
  EXPECT_EQ(rep.alpha(0.3), 1.0);
  EXPECT_EQ(measure_set(rep.mu, Interval::point(0.3)), 1.0);
  EXPECT_EQ(rep.norm, 1.0);
}

TEST(Represent, DiracAtA) {
  const auto rep = represent(dirac(0.0));
  const Limits l = rep.alpha.eval_with_limits(0.0);
  EXPECT_EQ(l.value, 0.0);
  EXPECT_EQ(l.right, 1.0);
  for (double t : {1e-300, 0.5, 1.0}) EXPECT_EQ(rep.alpha(t), 1.0);
  EXPECT_EQ(rs_integral([](double x) { return 7.0 - x; }, rep.alpha, 1e-10).value, 7.0);
}

TEST(Represent, Density) {
  const auto rep = represent(density_2x());
  for (double x : {0.0, 0.25, 0.5, 0.9, 1.0}) EXPECT_NEAR(rep.alpha(x), x * x, 1e-12);
  EXPECT_NEAR(measure_set(rep.mu, Interval::half_open(0.25, 0.75)), 0.5, 1e-12);
}

TEST(Represent, MergesDiracPointsAtTheSameLocation) {
  const auto ell = PositiveFunctional::make(kUnitK, {DiracCombo{{{0.5, 1.0}, {0.25, 2.0}, {0.5, 0.5}}}});
  const auto rep = represent(ell);
  ASSERT_EQ(rep.alpha.atoms().size(), 2u);
  EXPECT_EQ(measure_set(rep.mu, Interval::point(0.5)), 1.5);
}

TEST(Represent, RepresentationIdentity) {
  std::mt19937_64 rng(62);
  const double tol = 1e-10;
  const auto k = cantor_approx(3, kUnit);
  const auto ell = PositiveFunctional::make(
      k, {DiracCombo{{{0.0, 0.5}, {1.0 / 3.0, 0.25}}},
          DensityPart::make([](double x) { return 1.0 + std::sin(5 * x); }, {k.parts()[2], k.parts()[5]}),
          MeasureBacked{LSMeasure(devil_staircase(3, kUnit))}});
  const auto rep = represent(ell);
  for (int i = 0; i < 50; ++i) {
    const expr::Expression f(expr::random_probe(rng, kUnit));
    const RealFn g = [&](double x) { return f(x); };
    EXPECT_NEAR(apply(ell, g, tol), lebesgue_integral(g, rep.mu, k, tol).value, 2 * tol);
  }
  EXPECT_LE(measure_set(rep.mu, gaps(k)), 1e-12);
  EXPECT_NEAR(measure_set(rep.mu, k), norm(ell), 1e-12);
}

TEST(Transpose, Examples) {
  const auto lt = transpose_restriction(dirac(0.3));
  EXPECT_DOUBLE_EQ(lt([](double x) { return x; }, 1e-10), 0.3);
  const auto l2 = transpose_restriction(third_plus_density());
  EXPECT_NEAR(l2(kOne, 1e-10), norm(third_plus_density()), 1e-12);
}

TEST(Transpose, UrysohnFunctionActsLikeOne) {
  const auto k = make_compact({{0, 0.25}, {0.75, 1}}, kUnit);
  const auto ell = PositiveFunctional::make(
      k, {DiracCombo{{{0.1, 1.0}}}, DensityPart::make([](double x) { return x; }, {{0.75, 1}})});
  const auto lt = transpose_restriction(ell);
  const auto u = urysohn(k, {{0.4, 0.6}}, kUnit);
  EXPECT_EQ(lt([&](double x) { return u(x); }, 1e-10), lt(kOne, 1e-10));
}

TEST(Transpose, SharesTheRepresentation) {
  const auto ell = third_plus_density();
  const auto lt = transpose_restriction(ell);
  std::mt19937_64 rng(63);
  for (int i = 0; i < 20; ++i) {
    const expr::Expression f(expr::random_probe(rng, kUnit));
    const RealFn g = [&](double x) { return f(x); };
    EXPECT_NEAR(lt(g, 1e-10), rs_integral(g, lt.representation().alpha, 1e-10).value, 2e-10);
  }
}

TEST(Isometry, Examples) {
  const auto a = check_isometry(dirac(0.3));
  EXPECT_EQ(a.variation, 1.0);
  EXPECT_EQ(a.mass, 1.0);
  EXPECT_EQ(a.norm, 1.0);

  const auto k = cantor_approx(6, kUnit);
  const auto b = check_isometry(PositiveFunctional::make(k, {MeasureBacked{LSMeasure(devil_staircase(6, kUnit))}}));
  EXPECT_NEAR(b.variation, 1.0, 1e-12);
  EXPECT_NEAR(b.mass, 1.0, 1e-12);
  EXPECT_NEAR(b.norm, 1.0, 1e-12);
  EXPECT_LT(b.spread(), 1e-10);

  const auto c = check_isometry(third_plus_density());
  EXPECT_NEAR(c.variation, 4.0 / 3.0, 1e-12);
  EXPECT_LT(c.spread(), 1e-10);
}

TEST(ConstantOnGaps, Examples) {
  const auto k = make_compact({{0, 1}, {2, 3}}, {0, 3});
  EXPECT_FALSE(is_constant_on_gaps(MonotoneFn::identity({0, 3}), k));
  for (int n : {2, 4, 6, 8}) EXPECT_TRUE(is_constant_on_gaps(devil_staircase(n, kUnit), cantor_approx(n, kUnit)));
  const auto ell = PositiveFunctional::make(k, {DiracCombo{{{2.0, 1.0}}}});
  EXPECT_TRUE(is_constant_on_gaps(represent(ell).alpha, k));
}

TEST(ConstantOnGaps, SeesAtomsOnClosedHullSideEnds) {
  const auto k = make_compact({{0.5, 1}}, kUnit);
  EXPECT_FALSE(is_constant_on_gaps(MonotoneFn::step(kUnit, 0.0, 1.0), k));
  EXPECT_TRUE(is_constant_on_gaps(MonotoneFn::step(kUnit, 0.5, 1.0), k));
}

TEST(FactorsThroughK, StaircaseOnCantorSet) {
  const auto k = cantor_approx(4, kUnit);
  const std::vector<PiecewiseFunction> probes{restrict(kOne, k)};
  EXPECT_TRUE(factors_through_K(devil_staircase(4, kUnit), k, probes, 1e-10));
}

TEST(FactorsThroughK, IdentityCounterexample) {
  const ClosedInterval hull{0, 3};
  const auto k = make_compact({{0, 1}, {2, 3}}, hull);
  const std::vector<PiecewiseFunction> probes{restrict(kOne, k)};
  const auto alpha = MonotoneFn::identity(hull);
  EXPECT_FALSE(factors_through_K(alpha, k, probes, 1e-10));
  // A unit tent on the gap (1, 2) under dα = dx carries mass 1/2.
  EXPECT_NEAR(extension_discrepancy(alpha, k, probes[0], 1e-10), 0.5, 1e-9);
}

TEST(FactorsThroughK, AtomInsideAGap) {
  const auto k = make_compact({{0, 0.25}, {0.75, 1}}, kUnit);
  const auto alpha = MonotoneFn::step(kUnit, 0.4, 2.0);
  const std::vector<PiecewiseFunction> probes{restrict(kOne, k)};
  EXPECT_FALSE(factors_through_K(alpha, k, probes, 1e-10));
  // Tent height at 0.4 on the gap (0.25, 0.75) is 0.6.
  EXPECT_NEAR(extension_discrepancy(alpha, k, probes[0], 1e-10), 2.0 * 0.6, 1e-12);
}

TEST(RecoverCdf, DiracBlackBox) {
  const auto ell = dirac(0.3);
  const BlackBoxFunctional box = [&](const RealFn& f) { return apply(ell, f, 1e-10); };
  const auto inside = recover_cdf(box, kUnitK, 0.5, 1e-6);
  EXPECT_EQ(inside.value, 1.0);
  EXPECT_TRUE(inside.converged);
  const auto before = recover_cdf(box, kUnitK, 0.2, 1e-6);
  EXPECT_EQ(before.value, 0.0);
  EXPECT_TRUE(before.converged);
  EXPECT_GT(before.k, 10.0);
  EXPECT_EQ(recover_cdf(box, kUnitK, 1.0, 1e-6).value, norm(ell));
}

TEST(RecoverCdf, FlagsExhaustedBudget) {
  // Mass hugging the boundary of [a, x] converges like 1/k; a tiny tol cannot be met.
  const auto ell = density_2x();
  const BlackBoxFunctional box = [&](const RealFn& f) { return apply(ell, f, 1e-12); };
  const auto r = recover_cdf(box, kUnitK, 0.5, 1e-9);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.k, kMaxSharpness / 2);
  EXPECT_NEAR(r.value, 0.25, 1e-5);
}

TEST(RecoverCdf, MeasureBackedBlackBoxes) {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> at(0.0, 1.0);
  for (int f = 0; f < 10; ++f) {
    const auto raw = oracle::random_integrator(rng, kUnit);
    const LSMeasure mu(raw.build());
    const auto ell = PositiveFunctional::make(kUnitK, {MeasureBacked{mu}});
    const BlackBoxFunctional box = [&](const RealFn& g) { return apply(ell, g, 1e-10); };
    for (int i = 0; i < 5; ++i) {
      double x = at(rng);
      const bool near_atom = std::any_of(raw.atoms.begin(), raw.atoms.end(),
                                         [&](const auto& a) { return std::abs(a.at - x) < 1e-3; });
      if (near_atom) continue;
      const auto r = recover_cdf(box, kUnitK, x, 1e-4);
      EXPECT_NEAR(r.value, measure_set(mu, Interval::closed(0, x)), 1e-3) << "x = " << x;
    }
  }
}

TEST(RecoverCdf, Errors) {
  const BlackBoxFunctional box = [](const RealFn& f) { return f(0.5); };
  EXPECT_THROW(recover_cdf(box, kUnitK, 1.5, 1e-3), DomainError);
  EXPECT_THROW(recover_cdf(box, kUnitK, 0.5, 0.0), DomainError);
}

TEST(MeasuresEqualOnClosed, SameMeasure) {
  const LSMeasure mu(MonotoneFn::identity(kUnit));
  const auto c = make_compact({{0.2, 0.4}}, kUnit);
  const auto cmp = compare_on_closed(mu, mu, c, 1e-4);
  EXPECT_TRUE(cmp.equal);
  EXPECT_NEAR(cmp.exact_mu, 0.2, 1e-15);
  EXPECT_NEAR(cmp.oracle_mu, 0.2, 1e-4);
  EXPECT_TRUE(cmp.oracle_converged);
}

TEST(MeasuresEqualOnClosed, DiracVersusDensity) {
  const auto c = make_compact({{0.3, 0.3}}, kUnit);
  const auto a = represent(dirac(0.3)).mu;
  const auto b = represent(density_2x()).mu;
  const auto cmp = compare_on_closed(a, b, c, 1e-4);
  EXPECT_FALSE(cmp.equal);
  EXPECT_EQ(cmp.exact_mu, 1.0);
  EXPECT_EQ(cmp.exact_nu, 0.0);
  EXPECT_NEAR(cmp.oracle_mu, 1.0, 1e-4);
  EXPECT_NEAR(cmp.oracle_nu, 0.0, 1e-4);
}

TEST(MeasuresEqualOnClosed, DifferentDecompositionsOfOneFunctional) {
  const auto split = PositiveFunctional::make(
      kUnitK, {DensityPart::make([](double x) { return 2 * x; }, {{0, 0.5}}),
               DensityPart::make([](double x) { return x; }, {{0.5, 1}}),
               MeasureBacked{LSMeasure(MonotoneFn::make(kUnit, {}, {},
                                                        {DensityTerm::make([](double x) { return x; }, {0.5, 1})}))}});
  const auto a = represent(density_2x()).mu;
  const auto b = represent(split).mu;
  std::mt19937_64 rng(65);
  for (int i = 0; i < 20; ++i) {
    const auto c = make_compact(oracle::random_parts(rng, kUnit, 3), kUnit);
    const auto cmp = compare_on_closed(a, b, c, 1e-4);
    EXPECT_TRUE(cmp.equal);
    EXPECT_TRUE(cmp.oracle_converged);
    EXPECT_NEAR(cmp.oracle_mu, cmp.exact_mu, 1e-4);
  }
}

TEST(ClosedSetOracle, MatchesExactMassOnRandomMeasures) {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    MonotoneFn alpha = oracle::random_integrator(rng, kUnit).build();
    if (t % 2) {
      const double w = 5.0 + 60.0 * u(rng), lo = 0.3 * u(rng), hi = 0.6 + 0.4 * u(rng);
      alpha = combine(alpha, MonotoneFn::make(kUnit, {}, {},
                                              {DensityTerm::make([w](double x) { return 1.0 + std::sin(w * x); },
                                                                 {lo, hi})}));
    }
    const LSMeasure mu(alpha);
    const auto c = make_compact(oracle::random_parts(rng, kUnit, 3), kUnit);
    const auto r = closed_set_oracle(mu, c, 1e-4);
    EXPECT_TRUE(r.converged) << "trial " << t;
    EXPECT_NEAR(r.value, measure_set(mu, c), 1e-4) << "trial " << t;
  }
}

TEST(ClosedSetOracle, MassJustOutsideTheSetIsNotExtrapolatedAway) {
  // C ends 9e-5 before the staircase starts rising again.
  const auto mu = LSMeasure(devil_staircase(4, kUnit));
  const auto c = make_compact({{0.17087987782266537, 0.7406461933687516}}, kUnit);
  const auto r = closed_set_oracle(mu, c, 1e-4);
  EXPECT_NEAR(r.value, measure_set(mu, c), 1e-4);
}
