#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hofa/analysis.hpp"
#include "hofa/errors.hpp"
#include "hofa/factors.hpp"

namespace hofa {

/// f = f_str + f_psr + f_sml.
struct Decomposition {
  ComplexFn str;
  ComplexFn psr;
  ComplexFn sml;
};

struct DecompositionCheck {
  /// max_x |f - (f_str + f_psr + f_sml)|.
  double reconstruction_error = 0.0;
  /// f_str and f_str + f_sml in [0,1]; f_psr and f_sml in [-1,1].
  bool ranges_ok = true;
};

DecompositionCheck check_decomposition(const ComplexFn& f, const Decomposition& dec, double tol = 1e-9);

/// One row of a regularity trace.
struct TraceRow {
  int round = 0;
  int degree_used = 0;
  std::uint64_t factor_norm = 1;
  int factor_degree = 0;
  std::vector<double> energy;
  std::vector<double> psr_norm;
};

/// CSV with header round,degree_used,factor_norm,factor_degree,
/// energy_per_function,psr_norm_per_function; per-function lists are
/// separated by ';'.
std::string trace_csv(const std::vector<TraceRow>& trace);

struct RegularityOptions {
  /// Refinements allowed inside one weak regularity run.
  int max_iterations = 64;
  /// Rounds allowed in the iterated engines.
  int max_rounds = 64;
  InverseOptions oracle;
  /// Evaluation of the Gowers norms of f_psr.
  EvalMode norm_mode;
};

struct WeakRegularityResult {
  PolynomialFactor factor{2, 0};
  /// f_str = E[f|B] and f_psr = f - f_str; f_sml is zero.
  std::vector<Decomposition> parts;
  /// ||f_psr||_{U^{d+1}} per function for the final factor.
  std::vector<double> psr_norms;
  std::vector<TraceRow> trace;
  /// Oracle correlation and energy gain of the refined function, per refinement.
  std::vector<double> correlations;
  std::vector<double> gains;
  int iterations = 0;
  bool converged = false;
  /// The oracle found no correlating polynomial that refines the factor.
  bool oracle_failed = false;
};

/// Refines B0 by inverse-oracle witnesses until every ||f - E[f|B]||_{U^{d+1}}
/// is below eta. Inputs must take values in [0,1].
WeakRegularityResult weak_regularity(std::span<const ComplexFn> fs, const PolynomialFactor& base, int d,
                                     double eta, const RegularityOptions& options = {});

struct RegularityResult {
  /// B and its refinement B_next from the final round.
  PolynomialFactor factor{2, 0};
  PolynomialFactor next{2, 0};
  std::vector<Decomposition> parts;
  std::vector<double> psr_norms;
  std::vector<double> sml_norms;
  std::vector<TraceRow> trace;
  int rounds = 0;
  bool converged = false;
};

/// Iterates weak regularity with eta(||B_i||) until no function gains energy
/// theta^2; then f_str = E[f|B], f_psr = f - E[f|B_next] and
/// f_sml = E[f|B_next] - E[f|B].
RegularityResult regularity(std::span<const ComplexFn> fs, const PolynomialFactor& base, int d, double theta,
                            const std::function<double(std::uint64_t)>& eta, const RegularityOptions& options = {});

/// Growth functions of the strong regularity engine, indexed by
/// (degree D, norm N) of the current factor.
struct GrowthConfig {
  /// Non-increasing.
  std::function<double(int, std::uint64_t)> eta;
  std::function<double(int, std::uint64_t)> theta;
  /// Non-decreasing: the uniformity degree used in the next round.
  std::function<int(int, std::uint64_t)> degree;
  /// Non-decreasing rank requirement; checked against factor_rank when set.
  std::function<double(int, std::uint64_t)> rank;
  double zeta = 0.5;
  int c0 = 1;
  int selector_retries = 64;
  std::uint64_t seed = 0;
  RegularityOptions options;
};

/// eta and theta constant, d(D,N) = low while N <= threshold and high after.
GrowthConfig step_schedule(double eta, double theta, int low, int high, std::uint64_t threshold, double zeta,
                           int c0);

/// Whether the growth functions respect their declared monotonicity on a
/// grid of sample arguments.
bool check_monotone(const GrowthConfig& config, int max_degree = 4, std::uint64_t max_norm = 1u << 12);

struct SelectorCheck {
  /// Atoms a with a_{1,0} != 0 and a nonempty B-atom whose selected subatom
  /// breaks ||f_sml 1_S||_2 < theta ||1_S||_2 (an empty S counts as broken).
  std::uint64_t small_norm_violations = 0;
  /// Fraction of A_I whose nonempty atom average differs from the selected
  /// subatom average by zeta or more, or whose selected subatom is empty.
  double bad_fraction = 0.0;
  bool small_norm_ok = true;
  bool approximation_ok = true;
  bool ok() const { return small_norm_ok && approximation_ok; }
};

SelectorCheck check_selector(const SubatomSelector& selector, std::span<const ComplexFn> fs,
                             const std::vector<Decomposition>& parts, const PolynomialFactor& factor,
                             const PolynomialFactor& refined, double theta, double zeta);

struct StrongRegularityResult {
  PolynomialFactor base{2, 0};
  PolynomialFactor factor{2, 0};
  PolynomialFactor refined{2, 0};
  std::vector<Decomposition> parts;
  SubatomSelector selector{ParameterList(2), ParameterList(2)};
  SelectorCheck selector_check;
  int selector_attempts = 0;
  std::vector<TraceRow> trace;
  /// Uniformity degree used in each round.
  std::vector<int> degrees_used;
  /// d(deg B, ||B||) and the U^{d+1} norms of f_psr measured with it.
  int psr_degree = 1;
  std::vector<double> psr_norms;
  std::vector<double> sml_norms;
  /// eta(deg B', ||B'||) and theta(deg B, ||B||).
  double eta_bound = 0.0;
  double theta_bound = 0.0;
  bool psr_ok = true;
  bool ranges_ok = true;
  bool reconstruction_ok = true;
  /// Set when config.rank is given.
  std::optional<bool> rank_ok;
  int rounds = 0;
  bool converged = false;
};

/// Raised when no random selector meets the selection conclusions within the
/// retry cap; carries the selector with the fewest violations.
class SelectorRetryExceeded : public CapExceeded {
 public:
  SelectorRetryExceeded(const std::string& what, SubatomSelector best, SelectorCheck check)
      : CapExceeded(what), best_(std::move(best)), check_(check) {}
  const SubatomSelector& best() const noexcept { return best_; }
  const SelectorCheck& check() const noexcept { return check_; }

 private:
  SubatomSelector best_;
  SelectorCheck check_;
};

/// Starts from max(c0, ceil(log_p(2/zeta))) coordinate forms, iterates
/// regularity with degree d(deg B_i, ||B_i||), theta(D,N)/(2 sqrt(R) N) and
/// zeta/4 until the energy gain drops below (zeta/4)^3, then draws random
/// subatom selectors until one passes the selection checks.
/// Requires dim V >= c0 + ceil(log_p(2/zeta)).
StrongRegularityResult strong_regularity(std::span<const ComplexFn> fs, const GrowthConfig& config);

}  // namespace hofa
