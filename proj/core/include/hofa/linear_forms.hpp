#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hofa/field.hpp"

namespace hofa {

/// A system L = (L_1, ..., L_m) of linear forms in ell variables over F_p.
/// Row i holds the coefficients of L_i(x_1, ..., x_ell).
struct LinearSystem {
  int p = 2;
  int vars = 1;
  std::vector<std::vector<int>> rows;

  int size() const { return static_cast<int>(rows.size()); }
  /// Throws ShapeError / InvalidParameter on malformed rows.
  void validate() const;
};

enum class SystemKind {
  /// L^ell: all forms sum_j i_j x_j over i in F_p^ell, in point-index order.
  full,
  /// \bar L^ell: forms whose coefficient vector has first nonzero entry 1.
  projective,
};

LinearSystem canonical_system(int p, int ell, SystemKind kind);

/// (L_1(x), ..., L_m(x)) for x in V^ell.
std::vector<Point> evaluate(const LinearSystem& system, const Space& space,
                            std::span<const Point> x);

struct Classification {
  bool finite_complexity = false;
  bool translation_invariant = false;
  /// Cauchy-Schwarz complexity; empty when complexity is infinite.
  std::optional<int> complexity;
  /// Set when no degree up to the search cap gave independent tensor powers.
  bool cap_hit = false;
};

/// Classifies a system: finite complexity means no zero form and no two
/// proportional forms; the complexity is the least d >= 0 for which the
/// (d+1)-fold symmetric tensor powers of the coefficient vectors are linearly
/// independent over F_p, searched up to max(m - 2, 0).
Classification classify(const LinearSystem& system);

/// The (d+1)-fold symmetric tensor power of a coefficient vector, flattened
/// over multisets {i_1 <= ... <= i_{d+1}} with entry prod_j c_{i_j}.
std::vector<int> symmetric_tensor_power(std::span<const int> coeffs, int power, int p);

}  // namespace hofa
