#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hofa/hofa.hpp"
#include "hofa/suite/generators.hpp"
#include "hofa/suite/oracles.hpp"

namespace hofa {
namespace {

ComplexFn random_indicator(int p, int n, Rng& rng) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(checked_pow(p, n)));
  for (auto& m : mask) m = static_cast<std::uint8_t>(rng.below(2));
  return ComplexFn::indicator(p, n, mask);
}

TEST(Gowers, ConstantOneHasNormOne) {
  const ComplexFn one = ComplexFn::constant(2, 3, 1.0);
  for (int d = 1; d <= 3; ++d) EXPECT_NEAR(gowers_norm(one, d).value, 1.0, 1e-12);
}

TEST(Gowers, PhaseOfLowDegreeHasNormOne) {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    const MonomialRep poly = gen::random_poly(p, 2, 3, 1, rng);
    const int d = poly.degree_depth().degree;
    const GowersResult r = gowers_norm(ComplexFn::phase(poly.table()), d + 1);
    EXPECT_NEAR(r.value, 1.0, 1e-9) << to_string(poly);
  }
}

TEST(Gowers, BinaryQuadraticPhase) {
  MonomialRep q(2, 2);
  q.set_term({{1, 1}, 0}, 1);
  const GowersResult r = gowers_norm(ComplexFn::phase(q.table()), 2);
  EXPECT_NEAR(r.power.real(), 0.25, 1e-12);
  EXPECT_NEAR(r.value, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Gowers, IndicatorOfOrigin) {
  const std::vector<std::uint8_t> mask{1, 0};
  EXPECT_NEAR(gowers_norm(ComplexFn::indicator(2, 1, mask), 1).value, 0.5, 1e-12);
}

TEST(Gowers, MatchesTermByTermOracle) {
  Rng rng(67);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    const int n = p == 2 ? 3 : 2;
    const ComplexFn f = gen::random_bounded_fn(p, n, rng);
    for (int d = 1; d <= 2; ++d) {
      EXPECT_NEAR(gowers_norm(f, d).value, oracle::gowers_norm(f.values(), p, n, d), 1e-9);
    }
  }
}

TEST(Gowers, MonotoneInOrder) {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    const int n = p == 2 ? 4 : 2;
    const ComplexFn f = trial % 3 == 0 ? random_indicator(p, n, rng) : gen::random_bounded_fn(p, n, rng);
    double prev = 0.0;
    for (int d = 1; d <= 3; ++d) {
      const double v = gowers_norm(f, d).value;
      EXPECT_LE(prev, v + 1e-9);
      prev = v;
    }
  }
}

TEST(Lambda, AllOnes) {
  const LinearSystem triangle{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  const std::vector<ComplexFn> fs(3, ComplexFn::constant(2, 3, 1.0));
  EXPECT_NEAR(std::abs(lambda_density(triangle, fs).value - Complex(1.0)), 0.0, 1e-12);
}

TEST(Lambda, CharactersOnTriangleCancel) {
  const LinearSystem triangle{3, 2, {{1, 0}, {0, 1}, {1, 1}}};
  MonomialRep linear(3, 1);
  linear.set_term({{1}, 0}, 1);
  const std::vector<ComplexFn> fs(3, ComplexFn::phase(linear.table()));
  EXPECT_NEAR(std::abs(lambda_density(triangle, fs).value), 0.0, 1e-12);
}

TEST(Lambda, IndicatorCountsMatchOracleAndSamplingCovers) {
  const LinearSystem triangle{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  Rng rng(73);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ComplexFn> fs;
    std::vector<std::vector<int>> colors;
    for (int i = 0; i < 3; ++i) {
      fs.push_back(random_indicator(2, 4, rng));
      std::vector<int> c;
      for (Complex z : fs.back().values()) c.push_back(static_cast<int>(z.real()));
      colors.push_back(std::move(c));
    }
    const LambdaResult exact = lambda_density(triangle, fs);
    ASSERT_TRUE(exact.count.has_value());
    EXPECT_EQ(exact.denominator, 256u);
    std::uint64_t brute = 0;
    for (Point x = 0; x < 16; ++x) {
      for (Point y = 0; y < 16; ++y) {
        const Point z = x ^ y;
        brute += static_cast<std::uint64_t>(colors[0][x] * colors[1][y] * colors[2][z]);
      }
    }
    EXPECT_EQ(*exact.count, brute);
    const LambdaResult sampled = lambda_density(triangle, fs, EvalMode{false, 2000, static_cast<std::uint64_t>(trial)});
    const double truth = exact.value.real();
    covered += (sampled.ci_low <= truth && truth <= sampled.ci_high) ? 1 : 0;
  }
  EXPECT_GE(covered, 90);
}

TEST(CountingLemma, AllOnesAndStructuredInputs) {
  const LinearSystem triangle{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  const std::vector<ComplexFn> ones(3, ComplexFn::constant(2, 3, 1.0));
  const CountingProbe a = counting_lemma_deficiency(triangle, 1, ones);
  EXPECT_NEAR(a.lambda.real(), 1.0, 1e-12);
  EXPECT_NEAR(a.min_norm, 1.0, 1e-12);

  MonomialRep linear(2, 3);
  linear.set_term({{1, 0, 0}, 0}, 1);
  const std::vector<ComplexFn> phases(3, ComplexFn::phase(linear.table()));
  const CountingProbe b = counting_lemma_deficiency(triangle, 1, phases);
  EXPECT_NEAR(std::abs(b.lambda), 1.0, 1e-12);
  EXPECT_NEAR(b.min_norm, 1.0, 1e-12);
}

TEST(InverseOracle, FindsPerfectWitnessForPhase) {
  Rng rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const MonomialRep poly = gen::random_poly(2, 3, 2, 0, rng);
    const auto w = inverse_oracle(ComplexFn::phase(poly.table()), 2);
    ASSERT_TRUE(w.has_value());
    EXPECT_NEAR(w->correlation, 1.0, 1e-9);
  }
}

TEST(InverseOracle, LinearCaseMatchesFourierMaximum) {
  Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const ComplexFn f = gen::random_bounded_fn(2, n, rng);
    double best = 0.0;
    const Space& space = cached_space(2, n);
    for (Point xi = 0; xi < space.size(); ++xi) {
      Complex acc = 0.0;
      for (Point x = 0; x < space.size(); ++x) {
        int dot = 0;
        for (int i = 0; i < n; ++i) dot += space.coord(x, i) * space.coord(xi, i);
        acc += f[x] * (dot % 2 == 0 ? 1.0 : -1.0);
      }
      best = std::max(best, std::abs(acc) / static_cast<double>(space.size()));
    }
    const auto w = inverse_oracle(f, 1);
    ASSERT_TRUE(w.has_value());
    EXPECT_NEAR(w->correlation, best, 1e-9);
  }
}

TEST(ConditionalExpectation, TrivialFactorGivesMean) {
  Rng rng(89);
  const ComplexFn f = gen::random_unit_fn(3, 2, rng);
  const ComplexFn e = conditional_expectation(f, PolynomialFactor(3, 2));
  for (Point x = 0; x < 9; ++x) EXPECT_NEAR(std::abs(e[x] - f.mean()), 0.0, 1e-12);
}

TEST(ConditionalExpectation, MatchesCellAverageOracle) {
  Rng rng(97);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexFn f = gen::random_bounded_fn(2, 3, rng);
    const std::vector<MonomialRep> polys{gen::random_poly(2, 3, 2, 1, rng)};
    const PolynomialFactor b = PolynomialFactor(2, 3).refine(polys);
    const auto expected = oracle::cell_average(f.values(), b.atom_ranks());
    const ComplexFn e = conditional_expectation(f, b);
    for (Point x = 0; x < 8; ++x) EXPECT_NEAR(std::abs(e[x] - expected[x]), 0.0, 1e-12);
    EXPECT_NEAR(energy(f, b), std::pow(oracle::l2(expected), 2), 1e-12);
    const ComplexFn again = conditional_expectation(e, b);
    EXPECT_LT(again.distance(e), 1e-12);
  }
}

TEST(Energy, NonDecreasingUnderRefinement) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    const ComplexFn f = gen::random_unit_fn(p, 2, rng);
    const std::vector<MonomialRep> first{gen::random_poly(p, 2, 3, 1, rng)};
    const std::vector<MonomialRep> second{gen::random_poly(p, 2, 3, 1, rng)};
    const PolynomialFactor b = PolynomialFactor(p, 2).refine(first);
    const PolynomialFactor b2 = b.refine(second);
    EXPECT_GE(energy(f, b2), energy(f, b) - 1e-12);
  }
}

TEST(WeakRegularity, MeasurableInputNeedsNoRefinement) {
  MonomialRep x1(2, 3);
  x1.set_term({{1, 0, 0}, 0}, 1);
  const std::vector<MonomialRep> polys{x1};
  const PolynomialFactor b = PolynomialFactor(2, 3).refine(polys);
  std::vector<double> values;
  for (Point x = 0; x < 8; ++x) values.push_back((x & 1u) ? 1.0 : 0.0);
  const std::vector<ComplexFn> fs{ComplexFn::from_real(2, 3, values)};
  const WeakRegularityResult r = weak_regularity(fs, b, 1, 0.1);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.parts[0].psr.sup_norm(), 1e-12);
}

TEST(WeakRegularity, HyperplaneIndicatorNeedsOneForm) {
  std::vector<double> values;
  for (Point x = 0; x < 16; ++x) values.push_back((x & 1u) ? 0.0 : 1.0);
  const std::vector<ComplexFn> fs{ComplexFn::from_real(2, 4, values)};
  const WeakRegularityResult r = weak_regularity(fs, PolynomialFactor(2, 4), 1, 0.1);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.factor.params(), ParameterList(2, {{{1, 0}, 1}}));
  EXPECT_LT(r.parts[0].psr.sup_norm(), 1e-12);
  for (Point x = 0; x < 16; ++x) EXPECT_NEAR(r.parts[0].str[x].real(), values[x], 1e-12);
}

TEST(WeakRegularity, GainsDominateSquaredCorrelation) {
  Rng rng(103);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<ComplexFn> fs{gen::random_unit_fn(2, 4, rng), gen::random_unit_fn(2, 4, rng)};
    const WeakRegularityResult r = weak_regularity(fs, PolynomialFactor(2, 4), 1, 0.1);
    ASSERT_EQ(r.gains.size(), r.correlations.size());
    for (std::size_t i = 0; i < r.gains.size(); ++i) {
      EXPECT_GE(r.gains[i], r.correlations[i] * r.correlations[i] - 1e-12);
    }
    for (std::size_t t = 1; t < r.trace.size(); ++t) {
      double before = 0.0;
      double after = 0.0;
      for (double e : r.trace[t - 1].energy) before += e;
      for (double e : r.trace[t].energy) after += e;
      EXPECT_GE(after, before - 1e-12);
    }
    for (std::size_t i = 0; i < fs.size(); ++i) {
      EXPECT_LT(check_decomposition(fs[i], r.parts[i]).reconstruction_error, 1e-9);
      if (r.converged) {
        EXPECT_LT(r.psr_norms[i], 0.1);
      }
    }
  }
}

TEST(WeakRegularity, PseudorandomPartHasSmallCounts) {
  Rng rng(107);
  const std::vector<ComplexFn> fs{random_indicator(2, 4, rng)};
  const WeakRegularityResult r = weak_regularity(fs, PolynomialFactor(2, 4), 1, 0.1);
  ASSERT_TRUE(r.converged);
  const LinearSystem triangle{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  const std::vector<ComplexFn> psr(3, r.parts[0].psr);
  const CountingProbe probe = counting_lemma_deficiency(triangle, 1, psr);
  EXPECT_LT(probe.min_norm, 0.1);
  EXPECT_LE(std::abs(probe.lambda), probe.min_norm + 1e-12);
}

TEST(Regularity, MeasurableInputHaltsImmediately) {
  std::vector<double> values;
  for (Point x = 0; x < 8; ++x) values.push_back(0.25);
  const std::vector<ComplexFn> fs{ComplexFn::from_real(2, 3, values)};
  const RegularityResult r = regularity(fs, PolynomialFactor(2, 3), 1, 0.2, [](std::uint64_t) { return 0.1; });
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.parts[0].sml.sup_norm(), 1e-12);
  EXPECT_LT(r.parts[0].psr.sup_norm(), 1e-12);
}

TEST(Regularity, TwoIndicatorsOnFiveDimensions) {
  Rng rng(109);
  const std::vector<ComplexFn> fs{random_indicator(2, 5, rng), random_indicator(2, 5, rng)};
  const double theta = 0.2;
  const RegularityResult r = regularity(fs, PolynomialFactor(2, 5), 1, theta, [](std::uint64_t) { return 0.1; });
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(r.factor.params().is_le(r.next.params()));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const DecompositionCheck c = check_decomposition(fs[i], r.parts[i]);
    EXPECT_LT(c.reconstruction_error, 1e-9);
    EXPECT_TRUE(c.ranges_ok);
    EXPECT_LT(oracle::l2(r.parts[i].sml.values()), theta);
    const auto str = oracle::cell_average(fs[i].values(), r.factor.atom_ranks());
    for (Point x = 0; x < 32; ++x) EXPECT_NEAR(std::abs(r.parts[i].str[x] - str[x]), 0.0, 1e-12);
    EXPECT_LE(gowers_norm(r.parts[i].psr, 2).value, 0.1 + 1e-12);
  }
}

TEST(StrongRegularity, MeasurableInputTakesOneRound) {
  std::vector<double> values;
  for (Point x = 0; x < 32; ++x) values.push_back((x & 1u) ? 1.0 : 0.0);
  const std::vector<ComplexFn> fs{ComplexFn::from_real(2, 5, values)};
  const StrongRegularityResult r = strong_regularity(fs, step_schedule(0.1, 0.5, 1, 1, 1u << 20, 0.5, 1));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.rounds, 1);
  EXPECT_EQ(r.refined.params(), r.factor.params());
  EXPECT_TRUE(r.selector_check.ok());
  EXPECT_LT(r.parts[0].psr.sup_norm(), 1e-12);
}

TEST(StrongRegularity, DegreeScheduleEscalates) {
  Rng rng(113);
  const std::vector<ComplexFn> fs{random_indicator(2, 5, rng), random_indicator(2, 5, rng)};
  const GrowthConfig config = step_schedule(0.2, 0.5, 1, 2, 4, 0.5, 2);
  ASSERT_TRUE(check_monotone(config));
  const StrongRegularityResult r = strong_regularity(fs, config);
  ASSERT_GE(r.degrees_used.size(), 2u);
  EXPECT_EQ(r.degrees_used[0], 1);
  EXPECT_EQ(r.degrees_used[1], 2);
  EXPECT_TRUE(r.psr_ok);
  EXPECT_TRUE(r.ranges_ok);
  EXPECT_TRUE(r.reconstruction_ok);
  EXPECT_TRUE(r.selector_check.ok());
  EXPECT_LE(r.selector_check.bad_fraction, config.zeta);
}

TEST(Decomposition, ReconstructionCheckDetectsMismatch) {
  Rng rng(127);
  const ComplexFn f = gen::random_unit_fn(2, 3, rng);
  const Decomposition bad{f, f, ComplexFn(2, 3)};
  EXPECT_GT(check_decomposition(f, bad).reconstruction_error, 0.0);
}

TEST(TraceCsv, HeaderAndRows) {
  const std::vector<TraceRow> trace{{0, 1, 2, 1, {0.25, 0.5}, {0.1, 0.2}}};
  const std::string csv = trace_csv(trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "round,degree_used,factor_norm,factor_degree,energy_per_function,psr_norm_per_function");
  EXPECT_NE(csv.find("0.25;0.5"), std::string::npos);
}

}  // namespace
}  // namespace hofa
