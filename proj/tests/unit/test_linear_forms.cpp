#include <gtest/gtest.h>

#include <set>

#include "hofa/hofa.hpp"

namespace hofa {
namespace {

std::set<std::vector<int>> row_set(const LinearSystem& s) { return {s.rows.begin(), s.rows.end()}; }

TEST(CanonicalSystem, FullBinaryPlane) {
  const LinearSystem s = canonical_system(2, 2, SystemKind::full);
  EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(row_set(s), (std::set<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(CanonicalSystem, ProjectiveTernaryPlane) {
  const LinearSystem s = canonical_system(3, 2, SystemKind::projective);
  EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(row_set(s), (std::set<std::vector<int>>{{0, 1}, {1, 0}, {1, 1}, {1, 2}}));
}

TEST(CanonicalSystem, ProjectiveCounts) {
  EXPECT_EQ(canonical_system(2, 3, SystemKind::projective).size(), 7);
  for (int p : {2, 3, 5}) {
    for (int ell = 1; ell <= 3; ++ell) {
      const LinearSystem s = canonical_system(p, ell, SystemKind::projective);
      EXPECT_EQ(s.size(), static_cast<int>((checked_pow(p, ell) - 1) / (p - 1)));
      EXPECT_EQ(canonical_system(p, ell, SystemKind::full).size(), static_cast<int>(checked_pow(p, ell)));
      for (const auto& row : s.rows) EXPECT_EQ(fnz(FpVector{p, row}).value, 1);
    }
  }
}

TEST(Evaluate, Examples) {
  const Space& space = cached_space(2, 2);
  const LinearSystem triangle{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  const std::vector<Point> zero{0, 0};
  EXPECT_EQ(evaluate(triangle, space, zero), (std::vector<Point>{0, 0, 0}));
  const std::vector<Point> basis{space.unit(0), space.unit(1)};
  EXPECT_EQ(evaluate(triangle, space, basis), (std::vector<Point>{1, 2, 3}));
  const LinearSystem identity{2, 2, {{1, 0}, {0, 1}}};
  const std::vector<Point> x{3, 1};
  EXPECT_EQ(evaluate(identity, space, x), x);
}

TEST(Classify, TriangleHasComplexityOne) {
  const Classification c = classify(LinearSystem{2, 2, {{1, 0}, {0, 1}, {1, 1}}});
  EXPECT_TRUE(c.finite_complexity);
  ASSERT_TRUE(c.complexity.has_value());
  EXPECT_EQ(*c.complexity, 1);
}

TEST(Classify, RepeatedFormIsInfinite) {
  const Classification c = classify(LinearSystem{3, 2, {{1, 0}, {0, 1}, {2, 0}}});
  EXPECT_FALSE(c.finite_complexity);
  EXPECT_FALSE(c.complexity.has_value());
}

TEST(Classify, FullSystemInfiniteProjectiveFinite) {
  for (int p : {2, 3, 5}) {
    for (int ell = 1; ell <= 4; ++ell) {
      EXPECT_FALSE(classify(canonical_system(p, ell, SystemKind::full)).finite_complexity);
      EXPECT_TRUE(classify(canonical_system(p, ell, SystemKind::projective)).finite_complexity) << p << ' ' << ell;
    }
  }
}

TEST(Classify, AppendingAFormNeverLowersComplexity) {
  Rng rng(11);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    const int ell = 1 + static_cast<int>(rng.below(3));
    const int m = 1 + static_cast<int>(rng.below(4));
    LinearSystem s{p, ell, {}};
    for (int i = 0; i <= m; ++i) {
      std::vector<int> row(static_cast<std::size_t>(ell));
      for (int& c : row) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
      s.rows.push_back(row);
    }
    LinearSystem prefix = s;
    prefix.rows.pop_back();
    const Classification before = classify(prefix);
    const Classification after = classify(s);
    if (!before.finite_complexity) {
      EXPECT_FALSE(after.finite_complexity);
      continue;
    }
    if (!after.finite_complexity) continue;
    EXPECT_GE(*after.complexity, *before.complexity);
    ++compared;
  }
  EXPECT_GT(compared, 20);
}

TEST(SymmetricTensorPower, SquaresOfBinaryFormsAreIndependent) {
  const std::vector<std::vector<int>> coeffs{{1, 0}, {0, 1}, {1, 1}};
  FpMatrix first;
  FpMatrix second;
  for (const auto& c : coeffs) {
    first.push_back(symmetric_tensor_power(c, 1, 2));
    second.push_back(symmetric_tensor_power(c, 2, 2));
  }
  EXPECT_EQ(rank_mod_p(first, 2), 2);
  EXPECT_EQ(rank_mod_p(second, 2), 3);
}

TEST(LinearSystem, ValidateRejectsBadRows) {
  EXPECT_THROW((LinearSystem{2, 2, {{1}}}).validate(), ShapeError);
  EXPECT_THROW((LinearSystem{4, 1, {{1}}}).validate(), InvalidParameter);
}

}  // namespace
}  // namespace hofa
