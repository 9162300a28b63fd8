#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hofa {

/// Index of a point of F_p^n: the little-endian base-p integer whose digit i
/// is coordinate x_{i+1}.
using Point = std::uint32_t;

bool is_prime(int p);

/// Throws InvalidParameter unless p is a prime small enough for the library.
void require_prime(int p);

/// a mod m in [0, m).
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Exact integer power, throwing CapExceeded on overflow of int64.
std::int64_t checked_pow(std::int64_t base, int exp);

/// Inverse of a unit modulo m.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

/// Product modulo m without intermediate overflow.
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);

/// A scalar of F_p.
struct FpScalar {
  int p = 2;
  int value = 0;
};

/// A vector of F_p^n given by its coordinates x_1..x_n.
struct FpVector {
  int p = 2;
  std::vector<int> coords;
};

/// The first nonzero coordinate of x; 0 for the zero vector.
FpScalar fnz(const FpVector& x);

/// The vector space F_p^n with points encoded as integers.
class Space {
 public:
  Space(int p, int n);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  Point size() const noexcept { return size_; }

  /// Coordinate x_{i+1} of x.
  int coord(Point x, int i) const { return static_cast<int>((x / pow_[i]) % p_); }
  std::vector<int> coords(Point x) const;
  Point from_coords(std::span<const int> c) const;
  FpVector vector(Point x) const { return {p_, coords(x)}; }
  Point unit(int i) const { return pow_[i]; }

  Point add(Point a, Point b) const;
  Point sub(Point a, Point b) const { return add(a, neg(b)); }
  Point neg(Point a) const { return scale(p_ - 1, a); }
  Point scale(int c, Point a) const;

  /// Sum_j c_j * v_j for coefficients c and points v of equal length.
  Point combine(std::span<const int> c, std::span<const Point> v) const;

  /// Value of the first nonzero coordinate of x, 0 for x = 0.
  int fnz(Point x) const;
  /// Position (1-based) of the first nonzero coordinate of x, 0 for x = 0.
  int fnz_index(Point x) const;

  bool operator==(const Space& o) const { return p_ == o.p_ && n_ == o.n_; }

 private:
  int p_;
  int n_;
  Point size_;
  std::vector<Point> pow_;
  std::shared_ptr<const std::vector<Point>> add_table_;
  std::shared_ptr<const std::vector<Point>> scale_table_;
};

/// Process-wide shared instance of F_p^n; construction builds lookup tables
/// once per (p, n).
const Space& cached_space(int p, int n);

/// An element of U_{k+1} = (1/p^{k+1}) Z / Z stored as residue / p^{k+1}.
class TorusValue {
 public:
  TorusValue() = default;
  TorusValue(int p, int depth, std::int64_t residue);

  static TorusValue zero(int p, int depth = 0) { return TorusValue(p, depth, 0); }

  int p() const noexcept { return p_; }
  int depth() const noexcept { return depth_; }
  std::int64_t residue() const noexcept { return residue_; }
  std::int64_t modulus() const;

  /// The same element viewed in U_{depth+1} for depth >= this->depth().
  TorusValue embed(int depth) const;

  /// The representation with the smallest depth.
  TorusValue normalized() const;

  double to_real() const;
  bool is_zero() const noexcept { return residue_ == 0; }

  /// Multiplication by an integer (Z acts on the torus).
  TorusValue zmul(std::int64_t z) const;

  /// Both operands must be stored at the same depth; see embed().
  friend TorusValue operator+(const TorusValue& a, const TorusValue& b);
  friend TorusValue operator-(const TorusValue& a, const TorusValue& b);
  TorusValue operator-() const;

  /// Equality as elements of R/Z regardless of the stored depth.
  bool same_value(const TorusValue& o) const;

  friend bool operator==(const TorusValue&, const TorusValue&) = default;

 private:
  int p_ = 2;
  int depth_ = 0;
  std::int64_t residue_ = 0;
};

/// A (degree, depth) pair; ordered lexicographically.
struct DegreeDepth {
  int degree = 0;
  int depth = 0;
  friend auto operator<=>(const DegreeDepth&, const DegreeDepth&) = default;
};

std::string to_string(const DegreeDepth& dk);

/// Largest admissible depth for a given degree: floor((d-1)/(p-1)).
int max_depth(int p, int d);

/// Membership in D_p = {(d,k) : d > 0, 0 <= k <= floor((d-1)/(p-1))}.
bool in_domain(int p, DegreeDepth dk);

/// A finitely supported count vector I : D_p -> N.
class ParameterList {
 public:
  explicit ParameterList(int p = 2);
  ParameterList(int p, std::initializer_list<std::pair<const DegreeDepth, int>> counts);

  int p() const noexcept { return p_; }
  int count(DegreeDepth dk) const;
  void set(DegreeDepth dk, int count);
  const std::map<DegreeDepth, int>& counts() const noexcept { return counts_; }
  bool empty() const noexcept { return counts_.empty(); }

  /// ||I|| = p^{sum (k+1) I_{d,k}}; throws CapExceeded beyond 2^62.
  std::uint64_t norm() const;
  /// log_p ||I||.
  int log_norm() const;
  /// Largest d with a nonzero count; 0 for the empty list.
  int degree() const;
  int total_slots() const;

  /// Slot types in canonical order: (d,k) ascending, slot index ascending.
  std::vector<DegreeDepth> slot_types() const;
  /// Position of slot (d,k,i) (i is 1-based) in the canonical order.
  int slot_offset(DegreeDepth dk, int i) const;

  /// Pointwise comparison I <= J.
  bool is_le(const ParameterList& o) const;
  ParameterList operator+(const ParameterList& o) const;
  friend bool operator==(const ParameterList&, const ParameterList&) = default;

 private:
  int p_;
  std::map<DegreeDepth, int> counts_;
};

std::string to_string(const ParameterList& params);

/// An element of A_I: one residue mod p^{k+1} per slot, in slot order.
struct Atom {
  std::vector<std::int64_t> residues;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Position of `a` in the canonical enumeration of A_I.
std::uint64_t atom_rank(const ParameterList& params, const Atom& a);
Atom atom_unrank(const ParameterList& params, std::uint64_t rank);
std::vector<Atom> enumerate_atoms(const ParameterList& params);

/// Projection A_J -> A_I keeping slots i <= I_{d,k}; requires I <= J.
Atom atom_project(const ParameterList& from, const Atom& a, const ParameterList& to);

/// c . a, multiplying each (d,k) entry by sigma_c^{(d,k)}.
Atom atom_act(const ParameterList& params, int c, const Atom& a);

/// The torus value of slot s of an atom.
TorusValue atom_entry(const ParameterList& params, const Atom& a, int slot);

/// The unique t in Z/p^{depth+1} with t = b (mod p) and t^{p-1} = 1.
std::int64_t teichmuller(int p, int b, int depth);

/// sigma_b^{(d,k)}: the unique s in Z/p^{k+1} with s = b^d (mod p) and
/// s^{p-1} = 1. Requires (d,k) in D_p and b a unit.
std::int64_t sigma(int p, int b, int d, int k);

}  // namespace hofa
