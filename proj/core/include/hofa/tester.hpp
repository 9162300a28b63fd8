#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hofa/patterns.hpp"
#include "hofa/rng.hpp"

namespace hofa {

enum class SubspaceMode { linear, affine };

std::string to_string(SubspaceMode mode);

/// A d-dimensional subspace given by an ordered basis, plus a base point in
/// affine mode.
struct Subspace {
  int p = 2;
  int n = 0;
  std::vector<Point> basis;
  Point base = 0;
};

/// Uniform d-dimensional subspace of F_p^n: d x n matrices are drawn until
/// one has full rank; affine mode adds a uniform base point.
Subspace sample_subspace(int p, int n, int d, Rng& rng, SubspaceMode mode = SubspaceMode::linear);
Subspace sample_subspace(int p, int n, int d, std::uint64_t seed, SubspaceMode mode = SubspaceMode::linear);

/// y -> f(base + sum_j y_j basis_j) on F_p^d.
Coloring restrict_to(const Coloring& f, const Subspace& u);

/// A linear-invariant property of colorings F_p^n -> S.
class Property {
 public:
  enum class Kind { forbidden_family, predicate, linearity, classical_degree, allowable_2dim };

  /// f has the property iff no restriction of f to a subspace of dimension
  /// ell, in any ordered basis, equals a table in rejected[ell].
  static Property forbidden_family(int p, ColorSet colors, std::map<int, std::vector<Coloring>> rejected);
  /// Membership decided by `member`; an empty answer is an oracle failure.
  static Property predicate(std::string name, int p, ColorSet colors,
                            std::function<std::optional<bool>(const Coloring&)> member);
  /// f(x + y) = f(x) + f(y) with colors read as elements of F_p.
  static Property linearity(int p);
  /// f, read as an F_p-valued function, is a classical polynomial of degree <= t.
  static Property classical_degree(int p, int t);
  /// Every restriction of f to a 2-dimensional subspace is one of the allowed
  /// tables on F_p^2, the list being closed under GL_2(F_p). On domains of
  /// dimension below 2, f must be a restriction of an allowed table.
  static Property allowable_2dim(int p, ColorSet colors, const std::vector<Coloring>& allowed);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  int p() const noexcept { return p_; }
  const ColorSet& colors() const noexcept { return colors_; }
  /// Rejected tables of a forbidden family, or the GL_2-closed allowed tables.
  const std::map<int, std::vector<Coloring>>& tables() const noexcept { return tables_; }

  /// Membership of f; empty when the oracle cannot decide.
  std::optional<bool> contains(const Coloring& f) const;

 private:
  Property() = default;

  Kind kind_ = Kind::predicate;
  std::string name_;
  int p_ = 2;
  int degree_ = 0;
  ColorSet colors_;
  std::map<int, std::vector<Coloring>> tables_;
  std::function<std::optional<bool>(const Coloring&)> member_;
};

/// Raised when the property oracle cannot decide a restriction.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

struct TesterConfig {
  /// Dimension of the sampled subspace.
  int d = 2;
  /// When set (and po_mode is false), d = d_of_epsilon(*epsilon).
  std::optional<double> epsilon;
  std::function<int(double)> d_of_epsilon;
  /// Proximity-oblivious mode: d is used as given.
  bool po_mode = true;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  SubspaceMode mode = SubspaceMode::linear;
  std::size_t max_witnesses = 8;
};

struct TestReport {
  std::uint64_t trials = 0;
  std::uint64_t accepts = 0;
  std::uint64_t rejects = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  SubspaceMode mode = SubspaceMode::linear;
  int d = 0;
  /// Bases of rejected subspaces.
  std::vector<Subspace> witnesses;
};

/// Draws a random d-dimensional subspace U per trial and rejects when f|_U
/// lacks the property; when dim V <= d, f itself is tested.
TestReport run_tester(const Coloring& f, const Property& property, const TesterConfig& config);

/// Exact per-trial rejection probability of run_tester, by enumerating every
/// d-dimensional subspace (and every base point in affine mode).
double exact_rejection_probability(const Coloring& f, const Property& property, int d,
                                   SubspaceMode mode = SubspaceMode::linear);

/// Fraction of pairs (x, y) with f(x) + f(y) != f(x + y), colors read in F_p.
double blr_rejection_probability(const Coloring& f);

/// Samples pairs (x, y) and rejects when f(x) + f(y) != f(x + y).
TestReport blr_test(const Coloring& f, std::uint64_t trials, std::uint64_t seed);

/// One pattern (L^ell, T) per rejected table T on F_p^ell, where L^ell lists
/// the forms in point-index order so psi(i) = T(i).
std::vector<ColoredPattern> property_to_patterns(const Property& property, int ell);

struct CharacterizationOptions {
  /// Dimensions whose R^{p^n} functions fit under this bound are enumerated
  /// exhaustively; larger ones are sampled.
  std::uint64_t function_cap = std::uint64_t{1} << 17;
  std::uint64_t samples = 4096;
  std::uint64_t seed = 0;
};

struct CharacterizationReport {
  bool holds = true;
  /// False when some dimension was sampled rather than enumerated.
  bool exhaustive = true;
  std::optional<Coloring> counterexample;
  /// The restriction that misbehaved, for hereditary checks.
  std::optional<Subspace> subspace;
  std::uint64_t functions_checked = 0;
};

/// For n <= n_max: f has the property iff every d-dimensional restriction has
/// it. Dimensions n <= d hold trivially since the tester then reads f itself.
CharacterizationReport check_locally_characterized(const Property& property, int d, int n_max,
                                                   const CharacterizationOptions& options = {});

/// For n <= n_max: every restriction of a member to a proper subspace is a
/// member. Restriction dimensions are tried from 1 upward, then 0.
CharacterizationReport check_subspace_hereditary(const Property& property, int n_max,
                                                 const CharacterizationOptions& options = {});

/// Spot check of linear invariance: membership of f and of f o A agree for
/// random automorphisms A.
bool spot_check_invariance(const Property& property, const Coloring& f, int trials, std::uint64_t seed);

}  // namespace hofa
