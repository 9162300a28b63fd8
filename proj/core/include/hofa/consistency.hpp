#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "hofa/factors.hpp"
#include "hofa/field.hpp"
#include "hofa/linear_forms.hpp"

namespace hofa {

/// A tuple (a_1, ..., a_m) of residues mod p^{k+1}.
using Tuple = std::vector<std::int64_t>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept;
};

/// A finite subgroup of (Z/p^{k+1})^m built by adding generators.
class TupleGroup {
 public:
  TupleGroup(int m, std::int64_t modulus);

  bool contains(const Tuple& t) const { return set_.count(t) > 0; }
  /// Replaces the group by the one generated by it and g.
  void add_generator(const Tuple& g);
  const std::vector<Tuple>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

 private:
  Tuple add(const Tuple& a, const Tuple& b) const;

  int m_;
  std::int64_t mod_;
  std::vector<Tuple> elements_;
  std::unordered_set<Tuple, TupleHash> set_;
};

enum class WitnessMode {
  /// Homogeneous (d,k) witnesses vanishing at 0. Witnesses of lower degree or
  /// depth with the same character are included: adding a (d,k) witness on
  /// fresh variables realises the same tuples with exact type (d,k).
  strict,
  /// Also admits constant witnesses.
  slack,
};

struct ConsistencyOptions {
  /// Largest witness dimension; 0 selects ell + 1.
  int n_cap = 0;
  WitnessMode mode = WitnessMode::strict;
};

/// Phi_{d,k}(L): the value tuples (P(L_1(x)), ..., P(L_m(x))) of homogeneous
/// (d,k) witnesses P, closed under the group operation.
struct ConsistencySet {
  int p = 2;
  int m = 0;
  DegreeDepth type;
  /// Sorted elements of the closed set.
  std::vector<Tuple> elements;
  bool stabilized = false;
  /// Size of the closed set per witness dimension n = 1..n_cap.
  std::vector<std::size_t> per_n_sizes;
  /// Number of distinct tuples realised before closing, per dimension.
  std::vector<std::size_t> per_n_raw_sizes;
  /// Tuples realised at the last dimension (before closure), sorted.
  std::vector<Tuple> raw_elements;

  bool contains(const Tuple& t) const;
  std::size_t size() const { return elements.size(); }
};

ConsistencySet consistency_set(DegreeDepth type, const LinearSystem& system,
                               const ConsistencyOptions& options = {});

/// Memoising front end over consistency_set keyed by (type, system rows).
class ConsistencyOracle {
 public:
  explicit ConsistencyOracle(ConsistencyOptions options = {}) : options_(options) {}
  const ConsistencySet& get(DegreeDepth type, const LinearSystem& system);

 private:
  ConsistencyOptions options_;
  std::map<std::tuple<int, int, DegreeDepth, std::vector<std::vector<int>>>,
           std::unique_ptr<ConsistencySet>>
      cache_;
};

/// Phi_I(L): tuples of atoms whose (d,k,i) columns all lie in Phi_{d,k}(L).
struct ConsistencyProduct {
  ParameterList params;
  int m = 0;
  std::map<DegreeDepth, const ConsistencySet*> components;
  bool stabilized = true;

  /// prod |Phi_{d,k}(L)|^{I_{d,k}}, saturating at 2^64 - 1.
  std::uint64_t size() const;
  double log_size() const;
  /// Componentwise membership of a tuple of m atoms.
  bool contains(std::span<const Atom> tuple) const;
  /// Whether slot s of the m atoms forms a column of Phi_{type(s)}(L).
  bool column_consistent(std::span<const Atom> tuple, int slot) const;
};

/// Component sets are owned by the oracle, which must outlive the result.
ConsistencyProduct consistency_set_product(const ParameterList& params, const LinearSystem& system,
                                           ConsistencyOracle& oracle);

/// Generators of the module of homogeneous (d,k) witnesses on F_p^n: the
/// character projections of monomials of degree <= d and depth <= k.
std::vector<ValueTable> witness_generators(int p, int n, DegreeDepth type, WitnessMode mode);

struct FullDimensionalReport {
  bool full_dimensional = true;
  /// False when some consistency set did not stabilise within the cap.
  bool conclusive = true;
  std::vector<DegreeDepth> types;
  std::vector<std::size_t> system_sizes;
  std::vector<std::size_t> full_sizes;
};

/// Compares |Phi_{d,k}(L)| with |Phi_{d,k}(L^ell)| for every listed type.
FullDimensionalReport is_full_dimensional(const LinearSystem& system,
                                          std::span<const DegreeDepth> types,
                                          const ConsistencyOptions& options = {});

/// L' = [[M, 0], [c_1 M, ..., c_n M, N]] for an m x ell matrix M, an
/// (m n) x ell' matrix N given as n stacked m x ell' blocks, and scalars c.
LinearSystem cs_system_prime(const LinearSystem& m, const LinearSystem& n, std::span<const int> c);

/// L'' = [[M, 0, 0], [cM, N, 0], [cM, 0, N]].
LinearSystem cs_system_double_prime(const LinearSystem& m, const LinearSystem& n,
                                    std::span<const int> c);

struct EquidistributionReport {
  /// max over consistent atom tuples of |Pr[B(L(x)) = a] - 1/|Phi_I(L)||.
  double max_deviation = 0.0;
  /// Probability mass of atom tuples outside Phi_I(L); zero by the theory.
  double inconsistent_mass = 0.0;
  double consistent_count = 0.0;
  std::uint64_t observed_tuples = 0;
  std::uint64_t total = 0;
};

EquidistributionReport equidistribution_report(const PolynomialFactor& factor,
                                               const LinearSystem& system,
                                               ConsistencyOracle& oracle);

struct SelectorReport {
  bool projection_ok = true;
  bool equivariance_ok = true;
  bool consistency_ok = true;
  std::uint64_t atoms_checked = 0;
  std::uint64_t tuples_checked = 0;

  bool ok() const { return projection_ok && equivariance_ok && consistency_ok; }
};

/// Checks pi(s(a)) = a and b.s(a) = s(b.a) on all of A_I, and that s maps
/// Phi_I(L)-consistent tuples to Phi_{I'}(L)-consistent tuples for each L.
SelectorReport verify_selector(const SubatomSelector& selector, std::span<const LinearSystem> systems,
                               ConsistencyOracle& oracle);

}  // namespace hofa
