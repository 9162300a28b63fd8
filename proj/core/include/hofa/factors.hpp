#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hofa/field.hpp"
#include "hofa/ncpoly.hpp"
#include "hofa/rng.hpp"

namespace hofa {

/// A polynomial factor B = (P^i_{d,k}) of homogeneous polynomials on F_p^n.
/// Polynomials are kept in slot order: (d,k) ascending, then insertion order.
class PolynomialFactor {
 public:
  /// The trivial factor (one atom).
  PolynomialFactor(int p, int n);
  PolynomialFactor(int p, int n, std::vector<HomogeneousPoly> polys);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  const ParameterList& params() const noexcept { return params_; }
  const std::vector<HomogeneousPoly>& polys() const noexcept { return polys_; }
  /// Value tables of the polynomials, slot s stored at depth k_s.
  const std::vector<ValueTable>& tables() const noexcept { return tables_; }

  Atom atom(Point x) const;
  /// atom_rank(B(x)) for every x in F_p^n, in point order.
  const std::vector<std::uint64_t>& atom_ranks() const;

  /// Refines by homogeneous-decomposing each polynomial and appending the
  /// parts to their (d,k) groups. Constant parts and exact duplicates of
  /// existing polynomials are pruned.
  PolynomialFactor refine(std::span<const MonomialRep> polys) const;
  PolynomialFactor refine_homogeneous(std::span<const HomogeneousPoly> polys) const;

  /// The same factor viewed on F_p^{new_dim} (extra variables ignored).
  PolynomialFactor pad(int new_dim) const;

  /// The polynomials of type (1,0) in slot order.
  std::vector<ValueTable> linear_tables() const;

 private:
  int p_;
  int n_;
  ParameterList params_;
  std::vector<HomogeneousPoly> polys_;
  std::vector<ValueTable> tables_;
  mutable std::vector<std::uint64_t> ranks_;
};

/// Exact or sampled evaluation mode for averages.
struct EvalMode {
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct RankEstimate {
  /// The bias E e(D_{h_1}...D_{h_d} P(x)) is exactly zero.
  bool infinite = false;
  /// -log_p |bias|.
  double value = 0.0;
  double bias = 0.0;
  bool exact = true;
  /// 95% interval on the rank in sampled mode.
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Analytic rank -log_p |E_{x,h_1..h_d} e(D_{h_1}...D_{h_d} P(x))|.
RankEstimate analytic_rank(const ValueTable& poly, int d, const EvalMode& mode = {});

/// Exact histogram of D_{h_1}...D_{h_d} P(x) over all (x, h_1, ..., h_d),
/// indexed by residue mod p^{depth+1} of the normalised table of P.
std::vector<std::uint64_t> derivative_histogram(const ValueTable& poly, int d);

/// Whether sum_r hist[r] e(r / hist.size()) is exactly zero, for hist.size()
/// a power of p.
bool cyclotomic_sum_is_zero(const std::vector<std::uint64_t>& hist, int p);

/// sum_r hist[r] e(r / hist.size()) / total.
std::complex<double> cyclotomic_mean(const std::vector<std::uint64_t>& hist);

struct FactorRank {
  bool infinite = false;
  double min_rank = 0.0;
  /// Coefficient vector attaining the minimum (slot order).
  std::vector<std::int64_t> argmin;
  std::uint64_t combinations_tested = 0;
  bool exhaustive = true;
};

/// Minimum analytic rank over nonzero combinations sum lambda_i P_i, each
/// measured at the degree of the combination.
FactorRank factor_rank(const PolynomialFactor& factor, std::uint64_t max_combinations = 4096,
                       std::uint64_t seed = 0);

struct HighRankFactor {
  PolynomialFactor factor{2, 0};
  /// Number of disjoint copies summed for each (d,k).
  std::map<DegreeDepth, int> copies;
  /// Analytic rank of a single block and of the summed polynomial.
  std::map<DegreeDepth, double> block_rank;
  std::map<DegreeDepth, double> achieved_rank;
};

/// The homogeneous (d,k) part of the seed monomial
/// |x_1|^{p-1} ... |x_a|^{p-1} |x_{a+1}|^b / p^{k+1}, d = (k+a)(p-1)+b.
HomogeneousPoly high_rank_block(int p, DegreeDepth dk);

/// For every slot of I, sums enough disjoint copies of the block polynomial
/// to reach analytic rank >= r; each slot lives on its own variables.
HighRankFactor build_high_rank_factor(const ParameterList& params, double r, int max_copies = 64);

/// A map s : A_I -> A_{I'} that keeps the coordinates of a and fills each
/// new slot (d,k,i) with sum_j c^{j,i}_{d,k} P_{d,k}(|a^j_{1,0}|).
class SubatomSelector {
 public:
  SubatomSelector(ParameterList source, ParameterList target);

  static SubatomSelector random(const ParameterList& source, const ParameterList& target, Rng& rng);

  const ParameterList& source() const noexcept { return source_; }
  const ParameterList& target() const noexcept { return target_; }

  /// c^{j,i}_{d,k} for a new slot i (1-based, I_{d,k} < i <= I'_{d,k}) and
  /// linear index j (1-based, j <= I_{1,0}).
  std::int64_t coefficient(DegreeDepth dk, int i, int j) const;
  void set_coefficient(DegreeDepth dk, int i, int j, std::int64_t c);

  Atom apply(const Atom& a) const;

 private:
  ParameterList source_;
  ParameterList target_;
  std::map<DegreeDepth, std::vector<std::vector<std::int64_t>>> coeffs_;
};

}  // namespace hofa
