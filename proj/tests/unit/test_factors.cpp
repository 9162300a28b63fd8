#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hofa/hofa.hpp"
#include "hofa/suite/generators.hpp"
#include "hofa/suite/oracles.hpp"

namespace hofa {
namespace {

MonomialRep monomial(int p, int n, int var, int e, int depth) {
  MonomialRep r(p, n);
  std::vector<int> exps(static_cast<std::size_t>(n), 0);
  exps[static_cast<std::size_t>(var)] = e;
  r.set_term({exps, depth}, 1);
  return r;
}

HomogeneousPoly homogeneous(const MonomialRep& poly) {
  const auto cert = certify_homogeneous(poly);
  if (!cert) throw std::logic_error("test polynomial is not homogeneous");
  return *cert;
}

std::map<std::uint64_t, int> cell_sizes(const PolynomialFactor& f) {
  std::map<std::uint64_t, int> sizes;
  for (std::uint64_t r : f.atom_ranks()) ++sizes[r];
  return sizes;
}

TEST(Factor, TrivialFactorHasOneAtom) {
  const PolynomialFactor f(2, 3);
  EXPECT_TRUE(f.params().empty());
  const auto sizes = cell_sizes(f);
  ASSERT_EQ(sizes.size(), 1u);
  EXPECT_EQ(sizes.begin()->second, 8);
}

TEST(Factor, SingleLinearFormSplitsIntoHalves) {
  const PolynomialFactor f(2, 3, {homogeneous(monomial(2, 3, 0, 1, 0))});
  const auto sizes = cell_sizes(f);
  ASSERT_EQ(sizes.size(), 2u);
  for (const auto& [rank, size] : sizes) EXPECT_EQ(size, 4);
}

TEST(Factor, AtomMapIsEquivariant) {
  const PolynomialFactor f(3, 2, {homogeneous(monomial(3, 2, 0, 1, 0)), homogeneous(monomial(3, 2, 1, 2, 0))});
  EXPECT_EQ(f.params(), ParameterList(3, {{{1, 0}, 1}, {{2, 0}, 1}}));
  const Space& space = cached_space(3, 2);
  for (Point x = 0; x < space.size(); ++x) {
    for (int c = 1; c < 3; ++c) EXPECT_EQ(f.atom(space.scale(c, x)), atom_act(f.params(), c, f.atom(x)));
  }
}

TEST(Factor, AtomsMatchResidueOracle) {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<HomogeneousPoly> polys;
    while (polys.size() < 2) {
      const MonomialRep q = gen::random_poly(3, 2, 4, 1, rng, 2, false);
      if (q.terms().empty()) continue;
      if (auto h = certify_homogeneous(q)) polys.push_back(*h);
    }
    const PolynomialFactor f(3, 2, polys);
    for (Point x = 0; x < 9; ++x) {
      const Atom a = f.atom(x);
      for (std::size_t s = 0; s < f.polys().size(); ++s) {
        const int depth = f.params().slot_types()[s].depth;
        EXPECT_EQ(a.residues[s], oracle::poly_residues(f.polys()[s].poly, depth)[x]);
      }
    }
  }
}

TEST(Refine, ZeroPolynomialChangesNothing) {
  const PolynomialFactor f(2, 3, {homogeneous(monomial(2, 3, 1, 1, 0))});
  const std::vector<MonomialRep> zero{MonomialRep(2, 3)};
  const PolynomialFactor g = f.refine(zero);
  EXPECT_EQ(g.params(), f.params());
  EXPECT_EQ(g.atom_ranks(), f.atom_ranks());
}

TEST(Refine, TrivialFactorByCoordinate) {
  const std::vector<MonomialRep> x1{monomial(2, 1, 0, 1, 0)};
  const PolynomialFactor g = PolynomialFactor(2, 1).refine(x1);
  EXPECT_EQ(g.params(), ParameterList(2, {{{1, 0}, 1}}));
}

TEST(Refine, ProjectionRecoversCoarseAtoms) {
  const PolynomialFactor f(2, 3, {homogeneous(monomial(2, 3, 1, 1, 0))});
  MonomialRep q = monomial(2, 3, 0, 1, 1);
  q.set_term({{1, 0, 0}, 0}, 1);
  const std::vector<MonomialRep> polys{q};
  const PolynomialFactor g = f.refine(polys);
  EXPECT_TRUE(f.params().is_le(g.params()));
  EXPECT_EQ(g.params(), ParameterList(2, {{{1, 0}, 2}, {{2, 1}, 1}}));
  for (Point x = 0; x < 8; ++x) EXPECT_EQ(atom_project(g.params(), g.atom(x), f.params()), f.atom(x));
}

TEST(Refine, RandomRefinementsArePartitionRefinements) {
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    PolynomialFactor f(p, 2);
    for (int step = 0; step < 3; ++step) {
      const std::vector<MonomialRep> polys{gen::random_poly(p, 2, 3, 1, rng)};
      const PolynomialFactor g = f.refine(polys);
      EXPECT_TRUE(f.params().is_le(g.params()));
      std::map<std::uint64_t, std::uint64_t> coarse_of;
      for (Point x = 0; x < g.atom_ranks().size(); ++x) {
        const auto [it, inserted] = coarse_of.emplace(g.atom_ranks()[x], f.atom_ranks()[x]);
        EXPECT_EQ(it->second, f.atom_ranks()[x]);
        EXPECT_EQ(atom_project(g.params(), g.atom(x), f.params()), f.atom(x));
      }
      f = g;
    }
  }
}

TEST(AnalyticRank, Examples) {
  const RankEstimate zero = analytic_rank(MonomialRep(2, 2).table(), 2);
  EXPECT_FALSE(zero.infinite);
  EXPECT_NEAR(zero.value, 0.0, 1e-12);
  const RankEstimate quarter = analytic_rank(monomial(2, 1, 0, 1, 1).table(), 2);
  EXPECT_FALSE(quarter.infinite);
  EXPECT_NEAR(quarter.bias, 0.5, 1e-12);
  EXPECT_NEAR(quarter.value, 1.0, 1e-12);
}

TEST(AnalyticRank, DisjointCopiesAddRank) {
  for (int copies = 1; copies <= 3; ++copies) {
    MonomialRep q(2, copies);
    for (int i = 0; i < copies; ++i) {
      std::vector<int> exps(static_cast<std::size_t>(copies), 0);
      exps[static_cast<std::size_t>(i)] = 1;
      q.set_term({exps, 1}, 1);
    }
    EXPECT_NEAR(analytic_rank(q.table(), 2).value, copies * 1.0, 1e-9);
  }
}

TEST(AnalyticRank, SampledIntervalCoversExactValue) {
  MonomialRep q = monomial(3, 2, 0, 2, 0);
  q.set_term({{1, 1}, 0}, 1);
  const RankEstimate exact = analytic_rank(q.table(), 2);
  const RankEstimate sampled = analytic_rank(q.table(), 2, EvalMode{false, 200000, 5});
  EXPECT_FALSE(sampled.exact);
  EXPECT_LE(sampled.ci_low, exact.value);
  EXPECT_GE(sampled.ci_high, exact.value);
}

TEST(HighRank, LinearFormsHaveInfiniteRank) {
  const HighRankFactor h = build_high_rank_factor(ParameterList(2, {{{1, 0}, 2}}), 3.0);
  ASSERT_EQ(h.factor.tables().size(), 2u);
  for (const ValueTable& t : h.factor.tables()) EXPECT_TRUE(analytic_rank(t, 1).infinite);
  EXPECT_TRUE(factor_rank(h.factor).infinite);
}

TEST(HighRank, QuarterBlocksReachRankTwo) {
  const HighRankFactor h = build_high_rank_factor(ParameterList(2, {{{2, 1}, 1}}), 2.0);
  EXPECT_EQ(h.copies.at({2, 1}), 2);
  ASSERT_EQ(h.factor.tables().size(), 1u);
  MonomialRep q(2, 2);
  q.set_term({{1, 0}, 1}, 1);
  q.set_term({{0, 1}, 1}, 1);
  EXPECT_TRUE(h.factor.tables()[0].same_function(q.table()));
  EXPECT_NEAR(analytic_rank(h.factor.tables()[0], 2).value, 2.0, 1e-9);
}

TEST(HighRank, CombinationsKeepBlockRank) {
  const HighRankFactor h = build_high_rank_factor(ParameterList(2, {{{1, 0}, 1}, {{2, 1}, 2}}), 2.0);
  double min_block = std::numeric_limits<double>::infinity();
  for (const auto& [dk, r] : h.achieved_rank) min_block = std::min(min_block, r);
  const FactorRank fr = factor_rank(h.factor);
  EXPECT_TRUE(fr.exhaustive);
  EXPECT_TRUE(fr.infinite || fr.min_rank >= min_block - 1e-9);
  for (std::size_t s = 0; s < h.factor.tables().size(); ++s) {
    const int d = h.factor.params().slot_types()[s].degree;
    const RankEstimate est = analytic_rank(h.factor.tables()[s], d);
    EXPECT_TRUE(est.infinite || est.value >= h.achieved_rank.at(h.factor.params().slot_types()[s]) - 1e-9);
  }
}

TEST(HighRank, HyperplaneRestrictionLosesBoundedRank) {
  const HighRankFactor h = build_high_rank_factor(ParameterList(2, {{{2, 1}, 1}}), 4.0);
  const ValueTable& t = h.factor.tables()[0];
  const int n = t.dim();
  const double full = analytic_rank(t, 2).value;
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Subspace u = sample_subspace(2, n, n - 1, rng);
    const ValueTable r = compose_linear(t, u.basis);
    const RankEstimate est = analytic_rank(r, 2);
    EXPECT_TRUE(est.infinite || est.value >= full - 2 - 1e-9);
  }
}

TEST(Selector, ZeroCoefficientsPadWithZeros) {
  const ParameterList small(3, {{{1, 0}, 1}});
  const ParameterList big(3, {{{1, 0}, 1}, {{2, 0}, 1}});
  const SubatomSelector s(small, big);
  for (const Atom& a : enumerate_atoms(small)) {
    const Atom b = s.apply(a);
    EXPECT_EQ(atom_project(big, b, small), a);
    EXPECT_EQ(b.residues.back(), 0);
  }
}

TEST(Selector, RandomSelectorIsEquivariantAndConsistent) {
  const ParameterList small(3, {{{1, 0}, 1}});
  const ParameterList big(3, {{{1, 0}, 1}, {{2, 0}, 1}});
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const SubatomSelector s = SubatomSelector::random(small, big, rng);
    for (const Atom& a : enumerate_atoms(small)) {
      EXPECT_EQ(atom_project(big, s.apply(a), small), a);
      for (int b = 1; b < 3; ++b) EXPECT_EQ(s.apply(atom_act(small, b, a)), atom_act(big, b, s.apply(a)));
    }
    const std::vector<LinearSystem> systems{LinearSystem{3, 2, {{1, 0}, {0, 1}, {1, 1}}}};
    ConsistencyOracle oracle;
    const SelectorReport report = verify_selector(s, systems, oracle);
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.atoms_checked, 3u);
  }
}

TEST(Selector, MapsConsistentTriplesIntoBruteForceSets) {
  const ParameterList small(3, {{{1, 0}, 1}});
  const ParameterList big(3, {{{1, 0}, 1}, {{2, 0}, 1}});
  const LinearSystem triangle{3, 2, {{1, 0}, {0, 1}, {1, 1}}};
  const auto linear = oracle::consistency_set({1, 0}, triangle, 3);
  const auto quadratic = oracle::consistency_set({2, 0}, triangle, 3);
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const SubatomSelector s = SubatomSelector::random(small, big, rng);
    for (const auto& column : linear) {
      std::vector<std::int64_t> image;
      for (std::int64_t a : column) image.push_back(s.apply(Atom{{a}}).residues[1]);
      EXPECT_TRUE(quadratic.count(image) > 0);
    }
  }
}

}  // namespace
}  // namespace hofa
