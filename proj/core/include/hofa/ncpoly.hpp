#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hofa/field.hpp"

namespace hofa {

/// Largest p^n for which the derivative-based degree/depth check runs.
inline constexpr Point derivative_check_limit = 3125;

/// A function F_p^n -> U_{depth+1} stored as residues mod p^{depth+1}.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(int p, int n, int depth, std::vector<std::int64_t> residues);

  static ValueTable zero(int p, int n, int depth = 0);
  /// The constant function with value v.
  static ValueTable constant(int p, int n, const TorusValue& v);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  int depth() const noexcept { return depth_; }
  Point size() const noexcept { return static_cast<Point>(residues_.size()); }
  std::int64_t modulus() const;
  const std::vector<std::int64_t>& residues() const noexcept { return residues_; }
  std::int64_t residue(Point x) const { return residues_[x]; }
  TorusValue at(Point x) const { return TorusValue(p_, depth_, residues_[x]); }

  /// The same function stored at a larger depth.
  ValueTable embed(int depth) const;
  /// The same function stored at the smallest depth holding all its values.
  ValueTable normalized() const;
  bool is_zero() const;
  /// True when every value equals the value at 0.
  bool is_constant() const;

  ValueTable zmul(std::int64_t z) const;
  /// Pointwise sum; both tables must be stored at the same depth.
  friend ValueTable operator+(const ValueTable& a, const ValueTable& b);
  friend ValueTable operator-(const ValueTable& a, const ValueTable& b);

  /// Pointwise equality of the functions regardless of stored depth.
  bool same_function(const ValueTable& o) const;
  friend bool operator==(const ValueTable&, const ValueTable&) = default;

 private:
  int p_ = 2;
  int n_ = 0;
  int depth_ = 0;
  std::vector<std::int64_t> residues_;
};

struct ValueTableHash {
  std::size_t operator()(const ValueTable& t) const noexcept;
};

/// The additive derivative D_h P(x) = P(x + h) - P(x).
ValueTable derivative(const ValueTable& t, Point h);

/// y -> P(sum_j y_j v_j (+ base)) as a table on F_p^{images.size()}.
ValueTable compose_linear(const ValueTable& t, std::span<const Point> images, Point base = 0);

/// A monomial |x_1|^{i_1} ... |x_n|^{i_n} / p^{k+1}.
struct Monomial {
  std::vector<int> exps;
  int depth = 0;
  int total() const;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// alpha + sum_terms c * |x_1|^{i_1}...|x_n|^{i_n} / p^{k+1} with 0 <= i_j < p,
/// sum_j i_j > 0 and c in {1..p-1}. Every function F_p^n -> U_m has exactly
/// one such representation.
class MonomialRep {
 public:
  MonomialRep() = default;
  MonomialRep(int p, int n);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  const TorusValue& alpha() const noexcept { return alpha_; }
  void set_alpha(const TorusValue& a);
  const std::map<Monomial, int>& terms() const noexcept { return terms_; }
  /// Sets the coefficient of a monomial; c = 0 removes it.
  void set_term(const Monomial& m, int c);
  int coefficient(const Monomial& m) const;

  /// Largest depth among alpha and the terms.
  int value_depth() const;
  TorusValue evaluate(std::span<const int> x) const;
  ValueTable table() const;

  /// (max over terms of sum i + k(p-1), max term depth); (0,0) for constants.
  DegreeDepth degree_depth() const;

  /// The polynomial on F_p^{new_dim} obtained by renaming x_j to x_{j+offset}.
  MonomialRep embed_variables(int new_dim, int offset) const;

  friend bool operator==(const MonomialRep&, const MonomialRep&) = default;

 private:
  int p_ = 2;
  int n_ = 0;
  TorusValue alpha_;
  std::map<Monomial, int> terms_;
};

std::string to_string(const MonomialRep& rep);

/// The unique monomial representation of a table.
MonomialRep interpolate(const ValueTable& t);

/// Degree and depth from the definitions: least d with all (d+1)-fold
/// derivatives zero and least k with values in a coset of U_{k+1}.
/// Requires p^n <= derivative_check_limit.
DegreeDepth degree_depth_from_table(const ValueTable& t);

/// A polynomial certified homogeneous of type (degree, depth).
struct HomogeneousPoly {
  MonomialRep poly;
  DegreeDepth type;
};

/// Exhaustive check of P(bx) = sigma_b P(x) for b in F_p^* against the sigma
/// values of (deg P, depth P); constants use sigma = 1.
std::optional<HomogeneousPoly> certify_homogeneous(const MonomialRep& poly);
bool is_homogeneous(const MonomialRep& poly);

/// Writes P as a sum of homogeneous polynomials of degree <= deg P and depth
/// <= depth P. Parts are grouped by (degree, depth); a nonzero constant term
/// is returned as its own degree-0 part. The result is canonical.
std::vector<HomogeneousPoly> homogeneous_decomposition(const MonomialRep& poly);

/// Projection onto the character b -> teichmuller(b)^j of F_p^*:
/// (p-1)^{-1} sum_b teichmuller(b)^{-j} P(bx).
ValueTable character_projection(const ValueTable& t, int j);

/// A univariate homogeneous polynomial of depth k and degree
/// d' = k(p-1) + i with i in {1..p-1}, d' = d (mod p-1). The first match in
/// a canonical search order is returned.
HomogeneousPoly univariate_homogeneous(int p, int d, int k);

}  // namespace hofa
