#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hofa/analysis.hpp"
#include "hofa/errors.hpp"
#include "hofa/factors.hpp"
#include "hofa/field.hpp"
#include "hofa/linalg.hpp"
#include "hofa/linear_forms.hpp"
#include "hofa/regularity.hpp"

namespace hofa {

/// A finite color set S = {0, ..., R-1} with names and an optional action of
/// F_p^x. Without an action every scalar acts trivially.
class ColorSet {
 public:
  ColorSet() = default;
  explicit ColorSet(std::vector<std::string> labels);
  /// action[b-1][c] = b . c for b in 1..p-1; validated as a group action.
  ColorSet(int p, std::vector<std::string> labels, std::vector<std::vector<int>> action);

  /// Colors named "0", ..., "r-1".
  static ColorSet numbered(int r);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(int c) const;
  std::optional<int> find(std::string_view name) const;

  bool has_action() const noexcept { return !action_.empty(); }
  /// The prime of the action; 0 without one.
  int action_prime() const noexcept { return action_p_; }
  const std::vector<std::vector<int>>& action() const noexcept { return action_; }
  /// b . c for a unit b of F_p.
  int act(int b, int c) const;

  friend bool operator==(const ColorSet&, const ColorSet&) = default;

 private:
  std::vector<std::string> labels_;
  int action_p_ = 0;
  std::vector<std::vector<int>> action_;
};

/// A function f : F_p^n -> S stored by point index.
class Coloring {
 public:
  Coloring() = default;
  Coloring(int p, int n, ColorSet colors, std::vector<int> values);

  static Coloring constant(int p, int n, ColorSet colors, int c);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  Point size() const noexcept { return static_cast<Point>(values_.size()); }
  const ColorSet& colors() const noexcept { return colors_; }
  const std::vector<int>& values() const noexcept { return values_; }
  int operator[](Point x) const { return values_[x]; }
  void set(Point x, int c);

  /// Exhaustive check of f(cx) = c . f(x) for all units c and all x.
  bool is_projective() const;
  /// A pair (c, x) breaking projectivity, if any.
  std::optional<std::pair<int, Point>> projectivity_violation() const;

  /// 1 on f^{-1}(c).
  std::vector<std::uint8_t> mask(int c) const;
  ComplexFn indicator(int c) const;

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  int p_ = 2;
  int n_ = 0;
  ColorSet colors_;
  std::vector<int> values_;
};

/// H = (L, psi): an instance is x in V^ell with f(L_i(x)) = psi(i) for all i.
struct ColoredPattern {
  LinearSystem system;
  std::vector<int> psi;

  /// Throws ShapeError or InvalidParameter on a malformed pattern.
  void validate(const ColorSet& colors) const;
};

/// A colored pattern with atom labels phi(i) in A_I.
struct LabeledPattern {
  ColoredPattern pattern;
  ParameterList params{2};
  std::vector<Atom> phi;

  void validate(const ColorSet& colors) const;
};

struct PatternDensity {
  /// Instances counted (or hits among samples in sampled mode).
  std::uint64_t count = 0;
  /// p^{n ell} in exact mode, the number of samples otherwise.
  std::uint64_t total = 0;
  double density = 0.0;
  bool exact = true;
  /// Wilson 95% interval in sampled mode; equal to density when exact.
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// Up to max_witnesses instance tuples, in enumeration order.
  std::vector<std::vector<Point>> witnesses;
};

/// The fraction of x in V^ell forming an instance of H in f. With
/// generic_only, only tuples with x_1..x_ell linearly independent count.
PatternDensity pattern_density(const Coloring& f, const ColoredPattern& h, bool generic_only,
                               const EvalMode& mode = {}, std::size_t max_witnesses = 0);

/// Exact number of generic instances of H in f.
std::uint64_t count_generic_instances(const Coloring& f, const ColoredPattern& h);

/// Whether x_1..x_ell are linearly independent in F_p^n.
bool is_independent_tuple(const Space& space, std::span<const Point> x);

struct RelativeDensity {
  /// Empty for 0/0.
  std::optional<double> value;
  /// x in V^ell with every L_i(x) in X, f(L_i(x)) = psi(i), B(L_i(x)) = phi(i).
  std::uint64_t numerator = 0;
  /// x in V^ell with every L_i(x) in X.
  std::uint64_t denominator = 0;
};

/// Lambda(1_{X and f = psi(i) and B = phi(i)}) / Lambda(1_X, ..., 1_X).
RelativeDensity labeled_relative_density(const Coloring& f, const PolynomialFactor& factor,
                                         const LabeledPattern& h, std::span<const std::uint8_t> region);

/// Mask of the union of the given atoms of B.
std::vector<std::uint8_t> atom_union_mask(const PolynomialFactor& factor, std::span<const Atom> atoms);

/// A map xi : F_p x A_I -> S stored as table[x * |A_I| + rank(a)].
class CanonicalXi {
 public:
  CanonicalXi(int p, ParameterList params, ColorSet colors, std::vector<int> table);

  static CanonicalXi from_function(int p, const ParameterList& params, const ColorSet& colors,
                                   const std::function<int(int, const Atom&)>& fn);
  static CanonicalXi constant(int p, const ParameterList& params, const ColorSet& colors, int c);

  int p() const noexcept { return p_; }
  const ParameterList& params() const noexcept { return params_; }
  const ColorSet& colors() const noexcept { return colors_; }
  const std::vector<int>& table() const noexcept { return table_; }
  std::uint64_t atom_count() const noexcept { return atoms_; }

  int operator()(int x, const Atom& a) const;
  int at(int x, std::uint64_t atom_rank) const;

  /// Exhaustive check of xi(cx, c.a) = c . xi(x, a).
  bool is_projective() const;
  /// Whether color c is xi(x, a) for some x.
  bool attains(int c, const Atom& a) const;
  bool attains(int c) const;

 private:
  int p_;
  ParameterList params_;
  ColorSet colors_;
  std::vector<int> table_;
  std::uint64_t atoms_ = 1;
};

/// Xi(x) = xi(fnz(iota x), B(x)); iota defaults to the identity.
Coloring canonical_coloring(const CanonicalXi& xi, const PolynomialFactor& factor,
                            const std::optional<FpMatrix>& iota = std::nullopt);

enum class InducesStatus { found, not_found, never };

std::string to_string(InducesStatus status);

struct InducesBudget {
  /// Largest dimension of the enumerated factors.
  int n_max = 3;
  /// Ranks of the built high-rank factors tried.
  std::vector<double> high_ranks{2.0, 4.0};
  /// Factors with parameters I supplied by the caller.
  std::vector<PolynomialFactor> extra_factors;
  /// Largest number of factors enumerated per dimension.
  std::uint64_t max_factors_per_dim = 4096;
};

struct InducesResult {
  InducesStatus status = InducesStatus::not_found;
  std::optional<PolynomialFactor> factor;
  std::vector<Point> witness;
  std::uint64_t factors_tried = 0;
};

/// Searches for a generic H-instance in (Xi_{xi, Id, B}, B) over a family of
/// factors with the parameters of xi.
InducesResult canonically_induces(const CanonicalXi& xi, const LabeledPattern& h, const InducesBudget& budget = {});

/// Every factor on F_p^n whose slot (d,k) holds a nonzero homogeneous
/// polynomial of type exactly (d,k) and vanishing at 0, up to `limit` factors.
std::vector<PolynomialFactor> enumerate_factors(int p, int n, const ParameterList& params, std::uint64_t limit);

/// x -> (f(bx))_{b in F_p^x} over the colors S^{p-1}, which carry the action
/// b'.(c_b)_b = (c_{b'b})_b. Tuples are ranked with c_1 least significant.
Coloring projectivize(const Coloring& f);

/// Fraction of points where f and g differ.
double coloring_distance(const Coloring& f, const Coloring& g);

struct RecolorParams {
  /// Proximity parameter; sets the default threshold and c0.
  double epsilon = 0.5;
  /// High-density threshold; defaults to epsilon / (4R).
  std::optional<double> threshold;
  /// Strong regularity configuration; defaults to
  /// step_schedule(0.1, 0.5, 1, 2, p^{c0}, 0.5, ceil(log_p(2/epsilon))).
  std::optional<GrowthConfig> growth;
  std::uint64_t seed = 0;
  /// Largest number of projective xi tried on the irregular subspace.
  std::uint64_t xi_budget = 4096;
};

struct RecolorReport {
  double distance = 0.0;
  /// Points outside the irregular subspace whose color changed, over |V|.
  double cleanup_fraction = 0.0;
  /// |V~| / |V| = p^{-I_{1,0}}.
  double irregular_fraction = 0.0;
  /// Generic instances per family member before and after.
  std::vector<std::uint64_t> residual_before;
  std::vector<std::uint64_t> residual_after;
  double threshold = 0.0;
  int linear_forms = 0;
  std::uint64_t xi_tried = 0;
  /// The input already had no generic instances and was returned unchanged.
  bool unchanged = false;
  std::optional<StrongRegularityResult> regularity;
};

struct RecolorResult {
  Coloring g;
  RecolorReport report;
};

/// Raised when no projective xi within the budget clears the family.
class PatchFailed : public CapExceeded {
 public:
  PatchFailed(const std::string& what, RecolorReport report) : CapExceeded(what), report_(std::move(report)) {}
  const RecolorReport& report() const noexcept { return report_; }

 private:
  RecolorReport report_;
};

/// Recolors f so it has no generic instance of any pattern of the family:
/// low-density colors on regular atoms are replaced by a high-density color
/// chosen per F_p^x-orbit, and the common zero set of the linear polynomials
/// is recolored canonically.
RecolorResult removal_recolor(const Coloring& f, std::span<const ColoredPattern> family,
                              const RecolorParams& params = {});

}  // namespace hofa
