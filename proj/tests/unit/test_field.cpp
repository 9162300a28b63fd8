#include <gtest/gtest.h>

#include <set>

#include "hofa/hofa.hpp"
#include "hofa/suite/oracles.hpp"

namespace hofa {
namespace {

TEST(TorusValue, InversePairSumsToZero) {
  const TorusValue a(2, 1, 1);
  const TorusValue b(2, 1, 3);
  EXPECT_TRUE((a + b).is_zero());
}

TEST(TorusValue, Negation) {
  EXPECT_EQ(-TorusValue(3, 0, 1), TorusValue(3, 0, 2));
}

TEST(TorusValue, EmbedHalfIntoQuarters) {
  const TorusValue e = TorusValue(2, 0, 1).embed(1);
  EXPECT_EQ(e.depth(), 1);
  EXPECT_EQ(e.residue(), 2);
  EXPECT_EQ(e.modulus(), 4);
  EXPECT_TRUE(e.same_value(TorusValue(2, 0, 1)));
}

TEST(TorusValue, CrossDepthArithmeticIsRejected) {
  EXPECT_THROW(TorusValue(2, 0, 1) + TorusValue(2, 1, 1), ShapeError);
}

TEST(TorusValue, AbelianGroupAndInjectiveEmbedding) {
  for (int p : {2, 3, 5}) {
    for (int k = 0; k <= 2; ++k) {
      const std::int64_t mod = checked_pow(p, k + 1);
      std::set<std::int64_t> images;
      for (std::int64_t a = 0; a < mod; ++a) {
        const TorusValue x(p, k, a);
        EXPECT_TRUE((x + TorusValue::zero(p, k)) == x);
        EXPECT_TRUE((x + (-x)).is_zero());
        for (std::int64_t b = 0; b < mod; ++b) {
          const TorusValue y(p, k, b);
          EXPECT_EQ(x + y, y + x);
          EXPECT_EQ((x + y).embed(k + 1), x.embed(k + 1) + y.embed(k + 1));
        }
        images.insert(x.embed(k + 1).residue());
      }
      EXPECT_EQ(static_cast<std::int64_t>(images.size()), mod);
    }
  }
}

TEST(ParameterList, EmptyListHasNormOneAndDegreeZero) {
  const ParameterList empty(2);
  EXPECT_EQ(empty.norm(), 1u);
  EXPECT_EQ(empty.degree(), 0);
}

TEST(ParameterList, NormAndDegree) {
  const ParameterList a(2, {{{1, 0}, 2}, {{2, 1}, 1}});
  EXPECT_EQ(a.norm(), 16u);
  EXPECT_EQ(a.degree(), 2);
  const ParameterList b(3, {{{1, 0}, 1}});
  EXPECT_EQ(b.norm(), 3u);
  EXPECT_EQ(b.degree(), 1);
}

TEST(ParameterList, RejectsTypesOutsideDomain) {
  ParameterList a(2);
  EXPECT_THROW(a.set({1, 1}, 1), InvalidParameter);
  EXPECT_THROW(a.set({0, 0}, 1), InvalidParameter);
}

TEST(Atoms, EnumerationCountsNormAndRanksRoundTrip) {
  const std::vector<ParameterList> lists{
      ParameterList(2),
      ParameterList(2, {{{1, 0}, 2}, {{2, 1}, 1}}),
      ParameterList(3, {{{1, 0}, 1}, {{2, 0}, 1}}),
      ParameterList(3, {{{3, 1}, 1}}),
      ParameterList(5, {{{1, 0}, 1}, {{2, 0}, 2}}),
  };
  for (const ParameterList& params : lists) {
    const std::vector<Atom> atoms = enumerate_atoms(params);
    ASSERT_EQ(atoms.size(), params.norm()) << to_string(params);
    for (std::uint64_t r = 0; r < atoms.size(); ++r) {
      EXPECT_EQ(atom_rank(params, atoms[r]), r);
      EXPECT_EQ(atom_unrank(params, r), atoms[r]);
    }
  }
}

TEST(Atoms, ProjectionExamples) {
  const ParameterList two(2, {{{1, 0}, 2}});
  const ParameterList one(2, {{{1, 0}, 1}});
  EXPECT_EQ(atom_project(two, Atom{{1, 0}}, one), Atom{{1}});
  for (const Atom& a : enumerate_atoms(two)) EXPECT_EQ(atom_project(two, a, two), a);
  const ParameterList empty(2);
  const std::vector<Atom> atoms = enumerate_atoms(empty);
  ASSERT_EQ(atoms.size(), 1u);
  EXPECT_TRUE(atoms[0].residues.empty());
}

TEST(Atoms, ActionExamples) {
  const ParameterList params(3, {{{1, 0}, 1}});
  EXPECT_EQ(atom_act(params, 2, Atom{{1}}), Atom{{2}});
  const ParameterList wide(3, {{{1, 0}, 1}, {{2, 0}, 1}, {{3, 1}, 1}});
  for (const Atom& a : enumerate_atoms(wide)) EXPECT_EQ(atom_act(wide, 1, a), a);
}

TEST(Atoms, ActionIsAGroupActionAndCommutesWithProjection) {
  const ParameterList big(3, {{{1, 0}, 2}, {{2, 0}, 1}, {{3, 1}, 1}});
  const ParameterList small(3, {{{1, 0}, 1}, {{3, 1}, 1}});
  for (const Atom& a : enumerate_atoms(big)) {
    for (int c1 = 1; c1 < 3; ++c1) {
      const Atom projected_then_acted = atom_act(small, c1, atom_project(big, a, small));
      EXPECT_EQ(atom_project(big, atom_act(big, c1, a), small), projected_then_acted);
      for (int c2 = 1; c2 < 3; ++c2) {
        EXPECT_EQ(atom_act(big, (c1 * c2) % 3, a), atom_act(big, c1, atom_act(big, c2, a)));
      }
    }
  }
}

TEST(Fnz, Examples) {
  EXPECT_EQ(fnz(FpVector{3, {0, 0, 0}}).value, 0);
  EXPECT_EQ(fnz(FpVector{3, {0, 2, 1}}).value, 2);
  EXPECT_EQ(fnz(FpVector{3, {1, 0, 2}}).value, 1);
}

TEST(Fnz, SpaceAgreesWithVectorForm) {
  const Space& space = cached_space(3, 3);
  for (Point x = 0; x < space.size(); ++x) {
    EXPECT_EQ(space.fnz(x), fnz(space.vector(x)).value);
    const int idx = space.fnz_index(x);
    if (x == 0) {
      EXPECT_EQ(idx, 0);
    } else {
      EXPECT_EQ(space.coord(x, idx - 1), space.fnz(x));
    }
  }
}

TEST(Space, ArithmeticMatchesCoordinates) {
  for (int p : {2, 3, 5}) {
    const Space& space = cached_space(p, 2);
    for (Point a = 0; a < space.size(); ++a) {
      EXPECT_EQ(space.add(a, space.neg(a)), 0u);
      for (Point b = 0; b < space.size(); ++b) {
        const Point s = space.add(a, b);
        for (int i = 0; i < 2; ++i) {
          EXPECT_EQ(space.coord(s, i), (space.coord(a, i) + space.coord(b, i)) % p);
        }
      }
      for (int c = 0; c < p; ++c) {
        for (int i = 0; i < 2; ++i) EXPECT_EQ(space.coord(space.scale(c, a), i), (c * space.coord(a, i)) % p);
      }
    }
  }
}

TEST(Sigma, AgreesWithEnumerationOracle) {
  for (int p : {2, 3, 5}) {
    for (int d = 1; d <= 8; ++d) {
      for (int k = 0; k <= max_depth(p, d); ++k) {
        for (int b = 1; b < p; ++b) {
          const auto sols = oracle::sigma_solutions(p, b, d, k);
          ASSERT_EQ(sols.size(), 1u) << p << ' ' << b << ' ' << d << ' ' << k;
          EXPECT_EQ(sigma(p, b, d, k), sols[0]);
        }
      }
    }
  }
}

TEST(Sigma, Examples) {
  for (int p : {2, 3, 5}) {
    for (int d = 1; d <= 8; ++d) {
      for (int k = 0; k <= max_depth(p, d); ++k) EXPECT_EQ(sigma(p, 1, d, k), 1);
      for (int b = 1; b < p; ++b) EXPECT_EQ(sigma(p, b, d, 0), checked_pow(b, d) % p);
    }
  }
  EXPECT_EQ(sigma(3, 2, 3, 1), 8);
}

TEST(Sigma, MultiplicativeAndPeriodic) {
  for (int p : {2, 3, 5}) {
    for (int d = 1; d <= 8; ++d) {
      for (int k = 0; k <= max_depth(p, d); ++k) {
        const std::int64_t mod = checked_pow(p, k + 1);
        for (int b1 = 1; b1 < p; ++b1) {
          for (int b2 = 1; b2 < p; ++b2) {
            EXPECT_EQ(sigma(p, (b1 * b2) % p, d, k), mul_mod(sigma(p, b1, d, k), sigma(p, b2, d, k), mod));
          }
          EXPECT_EQ(sigma(p, b1, d, k), sigma(p, b1, d + p - 1, k));
        }
      }
    }
  }
}

TEST(Sigma, RejectsTypesOutsideDomain) {
  EXPECT_THROW(sigma(2, 1, 1, 1), InvalidParameter);
}

}  // namespace
}  // namespace hofa
