#include <gtest/gtest.h>

#include <set>

#include "hofa/hofa.hpp"
#include "hofa/suite/oracles.hpp"

namespace hofa {
namespace {

std::set<Tuple> as_set(const ConsistencySet& s) { return {s.elements.begin(), s.elements.end()}; }

const LinearSystem& triangle2() {
  static const LinearSystem s{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  return s;
}

TEST(ConsistencySet, SingleFormIsEverything) {
  for (int p : {2, 3, 5}) {
    const LinearSystem single{p, 1, {{1}}};
    const ConsistencySet s = consistency_set({1, 0}, single);
    EXPECT_TRUE(s.stabilized);
    EXPECT_EQ(s.size(), static_cast<std::size_t>(p));
    EXPECT_EQ(as_set(s), oracle::consistency_set({1, 0}, single, 1));
  }
}

TEST(ConsistencySet, TriangleIsTheSumRelation) {
  for (int p : {2, 3}) {
    const LinearSystem triangle{p, 2, {{1, 0}, {0, 1}, {1, 1}}};
    const ConsistencySet s = consistency_set({1, 0}, triangle);
    EXPECT_EQ(s.size(), static_cast<std::size_t>(p * p));
    for (const Tuple& t : s.elements) EXPECT_EQ((t[0] + t[1]) % p, t[2]);
    EXPECT_EQ(as_set(s), oracle::consistency_set({1, 0}, triangle, 2));
  }
}

TEST(ConsistencySet, MatchesBruteForceOnSmallTypes) {
  const std::vector<std::pair<DegreeDepth, LinearSystem>> cases{
      {{2, 1}, triangle2()},
      {{2, 0}, LinearSystem{3, 2, {{1, 0}, {0, 1}, {1, 1}}}},
      {{2, 1}, LinearSystem{2, 1, {{1}}}},
      {{3, 1}, LinearSystem{2, 2, {{1, 0}, {1, 1}}}},
  };
  for (const auto& [type, system] : cases) {
    const ConsistencySet s = consistency_set(type, system);
    EXPECT_TRUE(s.stabilized);
    EXPECT_EQ(as_set(s), oracle::consistency_set(type, system, system.vars + 1)) << to_string(type);
  }
}

TEST(ConsistencySet, ZeroTupleClosureAndNesting) {
  for (const LinearSystem& system : {triangle2(), canonical_system(2, 2, SystemKind::projective),
                                     LinearSystem{3, 2, {{1, 0}, {1, 1}, {1, 2}}}}) {
    for (DegreeDepth type : {DegreeDepth{1, 0}, DegreeDepth{2, 0}}) {
      if (!in_domain(system.p, type)) continue;
      const ConsistencySet s = consistency_set(type, system);
      EXPECT_TRUE(s.contains(Tuple(static_cast<std::size_t>(system.size()), 0)));
      const std::int64_t mod = checked_pow(system.p, type.depth + 1);
      for (const Tuple& a : s.elements) {
        for (const Tuple& b : s.elements) {
          Tuple c(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % mod;
          EXPECT_TRUE(s.contains(c));
        }
      }
      for (std::size_t n = 1; n < s.per_n_sizes.size(); ++n) EXPECT_LE(s.per_n_sizes[n - 1], s.per_n_sizes[n]);
    }
  }
}

TEST(ConsistencyProduct, EmptyParametersGiveSingleton) {
  ConsistencyOracle oracle;
  const ConsistencyProduct prod = consistency_set_product(ParameterList(2), triangle2(), oracle);
  EXPECT_EQ(prod.size(), 1u);
  const std::vector<Atom> tuple(3);
  EXPECT_TRUE(prod.contains(tuple));
}

TEST(ConsistencyProduct, SizeIsMultiplicativeAndMembershipIsJoint) {
  const ParameterList params(2, {{{1, 0}, 1}, {{2, 1}, 1}});
  ConsistencyOracle oracle;
  const ConsistencyProduct prod = consistency_set_product(params, triangle2(), oracle);
  const std::size_t linear = consistency_set({1, 0}, triangle2()).size();
  const std::size_t quarter = consistency_set({2, 1}, triangle2()).size();
  EXPECT_EQ(prod.size(), linear * quarter);

  const auto linear_set = oracle::consistency_set({1, 0}, triangle2(), 2);
  const auto quarter_set = oracle::consistency_set({2, 1}, triangle2(), 2);
  const std::vector<Atom> atoms = enumerate_atoms(params);
  std::uint64_t members = 0;
  for (const Atom& a : atoms) {
    for (const Atom& b : atoms) {
      for (const Atom& c : atoms) {
        const std::vector<Atom> tuple{a, b, c};
        const bool expected = linear_set.count({a.residues[0], b.residues[0], c.residues[0]}) > 0 &&
                              quarter_set.count({a.residues[1], b.residues[1], c.residues[1]}) > 0;
        EXPECT_EQ(prod.contains(tuple), expected);
        members += expected ? 1 : 0;
      }
    }
  }
  EXPECT_EQ(members, prod.size());

  const HighRankFactor h = build_high_rank_factor(params, 2.0);
  const Space& space = cached_space(2, h.factor.dim());
  for (Point x = 0; x < space.size(); ++x) {
    for (Point y = 0; y < space.size(); ++y) {
      const std::vector<Atom> tuple{h.factor.atom(x), h.factor.atom(y), h.factor.atom(space.add(x, y))};
      EXPECT_TRUE(prod.contains(tuple));
    }
  }
}

TEST(FullDimensional, Examples) {
  const std::vector<DegreeDepth> types{{1, 0}, {2, 1}};
  EXPECT_TRUE(is_full_dimensional(canonical_system(2, 2, SystemKind::projective), types).full_dimensional);
  EXPECT_TRUE(is_full_dimensional(canonical_system(2, 2, SystemKind::full), types).full_dimensional);
  const std::vector<DegreeDepth> linear{{1, 0}};
  for (int p : {2, 3}) {
    const FullDimensionalReport r = is_full_dimensional(LinearSystem{p, 2, {{1, 0}}}, linear);
    EXPECT_FALSE(r.full_dimensional);
    EXPECT_TRUE(r.conclusive);
    ASSERT_EQ(r.system_sizes.size(), 1u);
    EXPECT_EQ(r.system_sizes[0], static_cast<std::size_t>(p));
    EXPECT_EQ(r.full_sizes[0], static_cast<std::size_t>(p * p));
  }
}

TEST(CauchySchwarz, ProductIdentityOnGeneratedBlocks) {
  Rng rng(131);
  for (int p : {2, 3}) {
    ConsistencyOracle oracle;
    for (int trial = 0; trial < 8; ++trial) {
      LinearSystem m{p, 1, {}};
      LinearSystem n{p, 1, {}};
      for (int r = 0; r < 2; ++r) m.rows.push_back({1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 1)))});
      for (int r = 0; r < 2; ++r) n.rows.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(p)))});
      const std::vector<int> c{static_cast<int>(rng.below(static_cast<std::uint64_t>(p)))};
      const LinearSystem prime = cs_system_prime(m, n, c);
      const LinearSystem second = cs_system_double_prime(m, n, c);
      EXPECT_EQ(prime.size(), 4);
      EXPECT_EQ(second.size(), 6);
      for (DegreeDepth type : {DegreeDepth{1, 0}, DegreeDepth{2, 0}}) {
        const std::size_t a = oracle.get(type, m).size();
        const std::size_t b = oracle.get(type, prime).size();
        const std::size_t d = oracle.get(type, second).size();
        EXPECT_EQ(a * d, b * b) << "p = " << p << ", " << to_string(type);
      }
    }
  }
}

TEST(Equidistribution, IndependentLinearFormsAreExactlyUniform) {
  MonomialRep x1(2, 4);
  x1.set_term({{1, 0, 0, 0}, 0}, 1);
  MonomialRep x2(2, 4);
  x2.set_term({{0, 1, 0, 0}, 0}, 1);
  const PolynomialFactor b(2, 4, {*certify_homogeneous(x1), *certify_homogeneous(x2)});
  ConsistencyOracle oracle;
  const EquidistributionReport r = equidistribution_report(b, LinearSystem{2, 1, {{1}}}, oracle);
  EXPECT_NEAR(r.max_deviation, 0.0, 1e-12);
  EXPECT_EQ(r.inconsistent_mass, 0.0);
}

TEST(Equidistribution, DuplicatedPolynomialIsFarFromUniform) {
  MonomialRep x1(2, 4);
  x1.set_term({{1, 0, 0, 0}, 0}, 1);
  const HomogeneousPoly h = *certify_homogeneous(x1);
  const PolynomialFactor b(2, 4, {h, h});
  ConsistencyOracle oracle;
  const EquidistributionReport r = equidistribution_report(b, LinearSystem{2, 1, {{1}}}, oracle);
  EXPECT_NEAR(r.max_deviation, 0.25, 1e-12);
  EXPECT_EQ(r.inconsistent_mass, 0.0);
}

TEST(Equidistribution, HighRankFactorHasNoInconsistentMass) {
  const HighRankFactor h = build_high_rank_factor(ParameterList(2, {{{1, 0}, 1}, {{2, 1}, 1}}), 2.0);
  ConsistencyOracle oracle;
  for (const LinearSystem& system : {LinearSystem{2, 1, {{1}}}, triangle2()}) {
    const EquidistributionReport r = equidistribution_report(h.factor, system, oracle);
    EXPECT_EQ(r.inconsistent_mass, 0.0);
  }
}

}  // namespace
}  // namespace hofa
