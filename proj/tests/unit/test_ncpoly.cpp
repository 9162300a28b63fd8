#include <gtest/gtest.h>

#include "hofa/hofa.hpp"
#include "hofa/suite/generators.hpp"
#include "hofa/suite/oracles.hpp"

namespace hofa {
namespace {

/// c |x_var|^e / p^{depth+1} on F_p^n.
MonomialRep monomial(int p, int n, int var, int e, int depth, int c = 1) {
  MonomialRep r(p, n);
  std::vector<int> exps(static_cast<std::size_t>(n), 0);
  exps[static_cast<std::size_t>(var)] = e;
  r.set_term({exps, depth}, c);
  return r;
}

MonomialRep sum(const MonomialRep& a, const MonomialRep& b) {
  MonomialRep r = a;
  for (const auto& [m, c] : b.terms()) r.set_term(m, (r.coefficient(m) + c) % a.p());
  return r;
}

void expect_same_rep(const MonomialRep& a, const MonomialRep& b) {
  EXPECT_EQ(a.terms(), b.terms()) << to_string(a) << " vs " << to_string(b);
  EXPECT_TRUE(a.alpha().same_value(b.alpha()));
}

TEST(Evaluate, Examples) {
  const MonomialRep zero(3, 2);
  for (Point x = 0; x < 9; ++x) EXPECT_TRUE(zero.table().at(x).is_zero());
  const std::vector<int> one{1};
  EXPECT_TRUE(monomial(2, 1, 0, 1, 1).evaluate(one).same_value(TorusValue(2, 1, 1)));
  const std::vector<int> two{2};
  EXPECT_TRUE(monomial(3, 1, 0, 2, 0).evaluate(two).same_value(TorusValue(3, 0, 1)));
}

TEST(Evaluate, TableMatchesTermByTermOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    const MonomialRep poly = gen::random_poly(p, 2, 5, 2, rng);
    const ValueTable t = poly.table();
    const int depth = std::max(poly.value_depth(), t.depth());
    EXPECT_EQ(t.embed(depth).residues(), oracle::poly_residues(poly, depth)) << to_string(poly);
  }
}

TEST(Derivative, Examples) {
  const ValueTable quarter = monomial(2, 1, 0, 1, 1).table();
  EXPECT_TRUE(derivative(quarter, 0).is_zero());
  const ValueTable d1 = derivative(quarter, 1).embed(1);
  EXPECT_EQ(d1.residues(), (std::vector<std::int64_t>{1, 3}));
  const ValueTable c = ValueTable::constant(3, 2, TorusValue(3, 1, 4));
  for (Point h = 0; h < 9; ++h) EXPECT_TRUE(derivative(c, h).is_zero());
}

TEST(DegreeDepth, Examples) {
  const MonomialRep quarter = monomial(2, 1, 0, 1, 1);
  EXPECT_EQ(quarter.degree_depth(), (DegreeDepth{2, 1}));
  EXPECT_EQ(degree_depth_from_table(quarter.table()), (DegreeDepth{2, 1}));
  const MonomialRep half = monomial(2, 1, 0, 1, 0);
  EXPECT_EQ(half.degree_depth(), (DegreeDepth{1, 0}));
  EXPECT_EQ(degree_depth_from_table(half.table()), (DegreeDepth{1, 0}));
  EXPECT_EQ(MonomialRep(2, 2).degree_depth(), (DegreeDepth{0, 0}));
}

TEST(DegreeDepth, SymbolicTableAndOracleAgree) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const int p = trial % 3 == 0 ? 3 : 2;
    const int n = 1 + static_cast<int>(rng.below(3));
    const MonomialRep poly = gen::random_poly(p, n, 6, 2, rng);
    const DegreeDepth symbolic = poly.degree_depth();
    EXPECT_EQ(symbolic, degree_depth_from_table(poly.table())) << to_string(poly);
    EXPECT_EQ(symbolic, oracle::symbolic_type(poly)) << to_string(poly);
    if (symbolic.degree > 0) {
      EXPECT_LE(symbolic.depth, max_depth(p, symbolic.degree));
    }
  }
}

TEST(Interpolate, RoundTrip) {
  Rng rng(23);
  for (int p : {2, 3}) {
    for (int n = 1; n <= 2; ++n) {
      for (int trial = 0; trial < 60; ++trial) {
        const MonomialRep poly = gen::random_poly(p, n, 4, 1, rng);
        expect_same_rep(interpolate(poly.table()), poly);
      }
    }
  }
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::int64_t> residues(9);
    for (auto& r : residues) r = static_cast<std::int64_t>(rng.below(27));
    const ValueTable t(3, 2, 2, residues);
    EXPECT_TRUE(interpolate(t).table().same_function(t));
  }
}

TEST(Sigma, ExampleFromNcpolyTable) {
  EXPECT_EQ(sigma(3, 2, 3, 1), 8);
}

TEST(Homogeneity, Examples) {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) EXPECT_TRUE(is_homogeneous(gen::random_poly(2, 3, 4, 2, rng)));
  const MonomialRep square = monomial(3, 1, 0, 2, 0);
  const auto cert = certify_homogeneous(square);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->type, (DegreeDepth{2, 0}));
  for (int b = 1; b < 3; ++b) EXPECT_EQ(sigma(3, b, 2, 0), (b * b) % 3);
  EXPECT_FALSE(is_homogeneous(sum(monomial(3, 1, 0, 1, 0), square)));
}

TEST(Homogeneity, AgreesWithOracle) {
  Rng rng(31);
  int homogeneous = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int p = trial % 2 == 0 ? 3 : 5;
    const MonomialRep poly = gen::random_poly(p, 2, 4, 1, rng, 2, false);
    const bool expected = oracle::homogeneous_of_type(poly, oracle::symbolic_type(poly));
    EXPECT_EQ(is_homogeneous(poly), expected) << to_string(poly);
    homogeneous += expected ? 1 : 0;
  }
  EXPECT_GT(homogeneous, 0);
}

TEST(Decomposition, Examples) {
  const MonomialRep square = monomial(3, 1, 0, 2, 0);
  const auto single = homogeneous_decomposition(square);
  ASSERT_EQ(single.size(), 1u);
  expect_same_rep(single[0].poly, square);

  const auto binary = homogeneous_decomposition(sum(monomial(2, 1, 0, 1, 0), monomial(2, 1, 0, 1, 1)));
  ASSERT_EQ(binary.size(), 2u);
  EXPECT_EQ(binary[0].type, (DegreeDepth{1, 0}));
  EXPECT_TRUE(binary[0].poly.table().same_function(monomial(2, 1, 0, 1, 0).table()));
  EXPECT_EQ(binary[1].type, (DegreeDepth{2, 1}));
  EXPECT_TRUE(binary[1].poly.table().same_function(monomial(2, 1, 0, 1, 1).table()));

  const auto ternary = homogeneous_decomposition(sum(monomial(3, 1, 0, 1, 0), square));
  ASSERT_EQ(ternary.size(), 2u);
  EXPECT_EQ(ternary[0].type, (DegreeDepth{1, 0}));
  EXPECT_TRUE(ternary[0].poly.table().same_function(monomial(3, 1, 0, 1, 0).table()));
  EXPECT_EQ(ternary[1].type, (DegreeDepth{2, 0}));
  EXPECT_TRUE(ternary[1].poly.table().same_function(square.table()));
}

TEST(Decomposition, PartsSumToInputAndAreHomogeneous) {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = trial % 3 == 0 ? 2 : 3;
    const int n = 1 + static_cast<int>(rng.below(2));
    const MonomialRep poly = gen::random_poly(p, n, 5, 1, rng);
    const DegreeDepth top = poly.degree_depth();
    const auto parts = homogeneous_decomposition(poly);
    ValueTable total = ValueTable::zero(p, n, 4);
    for (const HomogeneousPoly& part : parts) {
      EXPECT_TRUE(oracle::homogeneous_of_type(part.poly, part.type)) << to_string(part.poly);
      EXPECT_LE(part.type.degree, top.degree);
      EXPECT_LE(part.type.depth, top.depth);
      total = total + part.poly.table().embed(4);
    }
    EXPECT_TRUE(total.same_function(poly.table())) << to_string(poly);
  }
}

TEST(UnivariateHomogeneous, Examples) {
  const HomogeneousPoly a = univariate_homogeneous(2, 1, 0);
  expect_same_rep(a.poly, monomial(2, 1, 0, 1, 0));
  const HomogeneousPoly b = univariate_homogeneous(2, 2, 1);
  expect_same_rep(b.poly, monomial(2, 1, 0, 1, 1));
  const HomogeneousPoly c = univariate_homogeneous(3, 2, 0);
  expect_same_rep(c.poly, monomial(3, 1, 0, 2, 0));
  for (const HomogeneousPoly* h : {&a, &b, &c}) {
    EXPECT_TRUE(oracle::homogeneous_of_type(h->poly, h->type));
    EXPECT_EQ(degree_depth_from_table(h->poly.table()), h->type);
  }
}

TEST(UnivariateHomogeneous, TypesAcrossSmallPrimes) {
  for (int p : {2, 3, 5}) {
    for (int d = 1; d <= 8; ++d) {
      for (int k = 0; k <= max_depth(p, d); ++k) {
        const HomogeneousPoly h = univariate_homogeneous(p, d, k);
        EXPECT_EQ(h.type.depth, k);
        EXPECT_EQ((h.type.degree - d) % (p - 1), 0);
        EXPECT_TRUE(oracle::homogeneous_of_type(h.poly, h.type)) << p << ' ' << d << ' ' << k;
      }
    }
  }
}

}  // namespace
}  // namespace hofa
