#include <gtest/gtest.h>

#include <map>
#include <set>

#include "hofa/hofa.hpp"
#include "hofa/suite/generators.hpp"
#include "hofa/suite/oracles.hpp"

namespace hofa {
namespace {

std::vector<Point> span_of(const Space& space, const std::vector<Point>& basis) {
  std::set<Point> pts{0};
  for (Point b : basis) {
    std::set<Point> next;
    for (Point q : pts) {
      for (int c = 0; c < space.p(); ++c) next.insert(space.add(q, space.scale(c, b)));
    }
    pts = std::move(next);
  }
  return {pts.begin(), pts.end()};
}

Coloring product_coloring(int n) {
  std::vector<int> values;
  for (Point x = 0; x < (Point{1} << n); ++x) values.push_back(static_cast<int>((x & 1u) & ((x >> 1) & 1u)));
  return Coloring(2, n, ColorSet::numbered(2), values);
}

TEST(SampleSubspace, ZeroAndFullDimension) {
  Rng rng(173);
  EXPECT_TRUE(sample_subspace(3, 3, 0, rng).basis.empty());
  const Subspace full = sample_subspace(3, 3, 3, rng);
  EXPECT_TRUE(oracle::independent(cached_space(3, 3), full.basis));
  EXPECT_EQ(span_of(cached_space(3, 3), full.basis).size(), 27u);
}

TEST(SampleSubspace, LinesOfBinaryCubeAreUniform) {
  Rng rng(179);
  std::map<std::vector<Point>, int> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[span_of(cached_space(2, 3), sample_subspace(2, 3, 1, rng).basis)];
  ASSERT_EQ(counts.size(), oracle::subspaces(2, 3, 1).size());
  ASSERT_EQ(counts.size(), 7u);
  const double expected = draws / 7.0;
  double chi2 = 0.0;
  for (const auto& [line, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9% quantile of chi-square with 6 degrees of freedom.
  EXPECT_LT(chi2, 22.458);
}

TEST(Restrict, LinearStaysLinearAndIdentityIsItself) {
  Rng rng(181);
  const Coloring f = gen::linear_coloring(3, 3, {1, 2, 1});
  const Property lin = Property::linearity(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Subspace u = sample_subspace(3, 3, 2, rng);
    EXPECT_EQ(lin.contains(restrict_to(f, u)), std::optional<bool>(true));
  }
  const Subspace id{3, 3, {1, 3, 9}, 0};
  EXPECT_EQ(restrict_to(f, id), f);
}

TEST(Restrict, ParityPlaneMatchesDirectEvaluation) {
  const Coloring f = gen::linear_coloring(2, 4, {1, 1, 1, 1});
  const Subspace u{2, 4, {0b0011, 0b0110}, 0};
  const Coloring r = restrict_to(f, u);
  const Space& space = cached_space(2, 4);
  for (Point y = 0; y < 4; ++y) {
    const Point x = space.add(space.scale(static_cast<int>(y & 1u), u.basis[0]),
                              space.scale(static_cast<int>((y >> 1) & 1u), u.basis[1]));
    EXPECT_EQ(r[y], f[x]);
  }
}

TEST(Tester, LinearFunctionIsNeverRejected) {
  const Coloring f = gen::linear_coloring(2, 6, {1, 0, 1, 1, 0, 1});
  TesterConfig config;
  config.d = 2;
  config.trials = 100000;
  config.seed = 9;
  const TestReport r = run_tester(f, Property::linearity(2), config);
  EXPECT_EQ(r.rejects, 0u);
  EXPECT_EQ(r.accepts, r.trials);
}

TEST(Tester, ProductRejectionMatchesSubspaceEnumeration) {
  const Coloring f = product_coloring(4);
  const Property lin = Property::linearity(2);
  const auto planes = oracle::subspaces(2, 4, 2);
  std::uint64_t bad = 0;
  for (const auto& [points, basis] : planes) bad += lin.contains(restrict_to(f, Subspace{2, 4, basis, 0})) == false;
  const double expected = static_cast<double>(bad) / static_cast<double>(planes.size());
  EXPECT_NEAR(exact_rejection_probability(f, lin, 2), expected, 1e-12);
  TesterConfig config;
  config.trials = 10000;
  config.seed = 7;
  const TestReport r = run_tester(f, lin, config);
  EXPECT_LE(r.ci_low, expected);
  EXPECT_GE(r.ci_high, expected);
}

TEST(Tester, AffineModeMatchesItsExactProbability) {
  const Coloring f = product_coloring(3);
  const Property lin = Property::linearity(2);
  const double exact = exact_rejection_probability(f, lin, 2, SubspaceMode::affine);
  TesterConfig config;
  config.trials = 20000;
  config.seed = 3;
  config.mode = SubspaceMode::affine;
  const TestReport r = run_tester(f, lin, config);
  EXPECT_LE(r.ci_low, exact);
  EXPECT_GE(r.ci_high, exact);
}

TEST(Tester, MembersAreAcceptedForEverySeed) {
  const std::vector<std::pair<Coloring, Property>> corpus{
      {gen::linear_coloring(3, 3, {1, 2, 0}), Property::linearity(3)},
      {gen::linear_coloring(2, 5, {1, 1, 0, 1, 0}), Property::classical_degree(2, 1)},
      {product_coloring(4), Property::classical_degree(2, 2)},
  };
  for (const auto& [f, prop] : corpus) {
    ASSERT_EQ(prop.contains(f), std::optional<bool>(true)) << prop.name();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      TesterConfig config;
      config.trials = 500;
      config.seed = seed;
      EXPECT_EQ(run_tester(f, prop, config).rejects, 0u) << prop.name();
    }
  }
}

TEST(Blr, ProductOnBinaryPlane) {
  const Coloring f = product_coloring(2);
  EXPECT_DOUBLE_EQ(blr_rejection_probability(f), 3.0 / 8.0);
  const auto [bad, total] = oracle::blr_count(f.values(), 2, 2);
  EXPECT_EQ(bad, 6u);
  EXPECT_EQ(total, 16u);
  const TestReport r = blr_test(f, 20000, 1);
  EXPECT_LE(r.ci_low, 0.375);
  EXPECT_GE(r.ci_high, 0.375);
}

TEST(PropertyToPatterns, SmallFamilies) {
  const Property empty = Property::forbidden_family(2, ColorSet::numbered(2), {});
  EXPECT_TRUE(property_to_patterns(empty, 1).empty());
  const Coloring table(2, 1, ColorSet::numbered(2), {0, 1});
  const Property one = Property::forbidden_family(2, ColorSet::numbered(2), {{1, {table}}});
  const auto patterns = property_to_patterns(one, 1);
  ASSERT_EQ(patterns.size(), 1u);
  EXPECT_EQ(patterns[0].system.size(), 2);
  EXPECT_EQ(patterns[0].psi, (std::vector<int>{0, 1}));
}

TEST(PropertyToPatterns, InstancesMatchRejectedRestrictions) {
  const Coloring bad(2, 2, ColorSet::numbered(2), {0, 1, 1, 1});
  const Property prop = Property::forbidden_family(2, ColorSet::numbered(2), {{2, {bad}}});
  const auto patterns = property_to_patterns(prop, 2);
  const auto planes = oracle::subspaces(2, 3, 2);
  for (int code = 0; code < 256; ++code) {
    std::vector<int> values;
    for (int x = 0; x < 8; ++x) values.push_back((code >> x) & 1);
    const Coloring f(2, 3, ColorSet::numbered(2), values);
    std::set<std::vector<Point>> hit;
    for (const ColoredPattern& h : patterns) {
      const Space& space = cached_space(2, 3);
      for (Point x = 0; x < 8; ++x) {
        for (Point y = 0; y < 8; ++y) {
          const std::vector<Point> tuple{x, y};
          if (!oracle::independent(space, tuple)) continue;
          const std::vector<Point> images = evaluate(h.system, space, tuple);
          bool match = true;
          for (std::size_t i = 0; i < images.size(); ++i) match = match && f[images[i]] == h.psi[i];
          if (match) hit.insert(span_of(space, tuple));
        }
      }
    }
    const double from_patterns = static_cast<double>(hit.size()) / static_cast<double>(planes.size());
    EXPECT_NEAR(exact_rejection_probability(f, prop, 2), from_patterns, 1e-12) << code;
    EXPECT_EQ(!hit.empty(), prop.contains(f) == false) << code;
  }
}

TEST(LocallyCharacterized, LinearityOverTheBinaryField) {
  const CharacterizationReport r = check_locally_characterized(Property::linearity(2), 2, 4);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_GT(r.functions_checked, 0u);
}

TEST(LocallyCharacterized, DimensionParityFails) {
  const Property parity = Property::predicate("even dimension", 2, ColorSet::numbered(2),
                                              [](const Coloring& f) { return std::optional<bool>(f.dim() % 2 == 0); });
  const CharacterizationReport r = check_locally_characterized(parity, 1, 3);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.counterexample.has_value());
}

TEST(LocallyCharacterized, VacuousWhenDimensionNeverExceedsD) {
  const Property parity = Property::predicate("even dimension", 2, ColorSet::numbered(2),
                                              [](const Coloring& f) { return std::optional<bool>(f.dim() % 2 == 0); });
  EXPECT_TRUE(check_locally_characterized(parity, 3, 3).holds);
}

TEST(Hereditary, Examples) {
  EXPECT_TRUE(check_subspace_hereditary(Property::linearity(2), 3).holds);
  const Property three = Property::predicate("three colors", 2, ColorSet::numbered(3), [](const Coloring& f) {
    std::set<int> seen(f.values().begin(), f.values().end());
    return std::optional<bool>(seen.size() >= 3);
  });
  const CharacterizationReport r = check_subspace_hereditary(three, 2);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.subspace.has_value());
  EXPECT_EQ(r.subspace->basis.size(), 1u);

  std::vector<Coloring> allowed;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) allowed.push_back(gen::linear_coloring(2, 2, {a, b}));
  }
  EXPECT_TRUE(check_subspace_hereditary(Property::allowable_2dim(2, ColorSet::numbered(2), allowed), 3).holds);
}

TEST(Invariance, SpotChecks) {
  EXPECT_TRUE(spot_check_invariance(Property::linearity(3), gen::linear_coloring(3, 2, {1, 1}), 20, 5));
  EXPECT_TRUE(spot_check_invariance(Property::classical_degree(2, 2), product_coloring(3), 20, 5));
}

}  // namespace
}  // namespace hofa
