#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hofa/factors.hpp"
#include "hofa/field.hpp"
#include "hofa/linear_forms.hpp"
#include "hofa/ncpoly.hpp"

namespace hofa {

using Complex = std::complex<double>;

/// A function F_p^n -> C stored by point index. Functions built from an
/// indicator or a phase e(P) remember that source so sums over them can be
/// accumulated exactly.
class ComplexFn {
 public:
  ComplexFn() = default;
  /// The zero function.
  ComplexFn(int p, int n);
  ComplexFn(int p, int n, std::vector<Complex> values);

  static ComplexFn constant(int p, int n, Complex c);
  static ComplexFn from_real(int p, int n, std::span<const double> values);
  /// 1 on points with mask[x] != 0, else 0.
  static ComplexFn indicator(int p, int n, std::span<const std::uint8_t> mask);
  /// x -> e(P(x)) = exp(2 pi i P(x)).
  static ComplexFn phase(const ValueTable& poly);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  Point size() const noexcept { return static_cast<Point>(values_.size()); }
  const std::vector<Complex>& values() const noexcept { return values_; }
  Complex operator[](Point x) const { return values_[x]; }
  Complex& at(Point x);

  /// Set when every value is exactly 0 or 1.
  const std::optional<std::vector<std::uint8_t>>& indicator_source() const noexcept { return indicator_; }
  /// Set when the function is e(P) for the stored table.
  const std::optional<ValueTable>& phase_source() const noexcept { return phase_; }

  double sup_norm() const;
  bool is_bounded(double tol = 1e-12) const { return sup_norm() <= 1.0 + tol; }
  bool is_real(double tol = 1e-12) const;
  /// Whether all values are real and lie in [lo, hi] up to tol.
  bool in_range(double lo, double hi, double tol = 1e-9) const;
  Complex mean() const;
  /// (E |f|^2)^{1/2}.
  double l2_norm() const;

  ComplexFn conj() const;
  /// Delta_h f(x) = f(x + h) conj(f(x)).
  ComplexFn multiplicative_derivative(Point h) const;

  friend ComplexFn operator+(const ComplexFn& a, const ComplexFn& b);
  friend ComplexFn operator-(const ComplexFn& a, const ComplexFn& b);
  friend ComplexFn operator*(const ComplexFn& a, const ComplexFn& b);
  ComplexFn scaled(Complex c) const;

  /// max_x |f(x) - g(x)|.
  double distance(const ComplexFn& o) const;

 private:
  void check_compatible(const ComplexFn& o) const;

  int p_ = 2;
  int n_ = 0;
  std::vector<Complex> values_;
  std::optional<std::vector<std::uint8_t>> indicator_;
  std::optional<ValueTable> phase_;
};

struct GowersResult {
  double value = 0.0;
  /// The average E (Delta_{h_1}...Delta_{h_d} f)(x) whose 2^d-th root is the norm.
  Complex power = 0.0;
  bool exact = true;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t samples = 0;
};

/// ||f||_{U^d}. Exact mode requires p^{n(d+1)} within the enumeration cap;
/// phases e(P) are evaluated through the integer derivative histogram.
GowersResult gowers_norm(const ComplexFn& f, int d, const EvalMode& mode = {});

struct LambdaResult {
  Complex value = 0.0;
  bool exact = true;
  /// For indicator inputs: the number of x in V^ell with all f_i(L_i(x)) = 1
  /// and the denominator p^{n ell}.
  std::optional<std::uint64_t> count;
  std::uint64_t denominator = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Lambda_L(f_1, ..., f_m) = E_{x in V^ell} prod_i f_i(L_i(x)).
LambdaResult lambda_density(const LinearSystem& system, std::span<const ComplexFn> fs,
                            const EvalMode& mode = {});

struct CountingProbe {
  Complex lambda = 0.0;
  /// min over i of ||f_i||_{U^{d+1}}.
  double min_norm = 0.0;
};

CountingProbe counting_lemma_deficiency(const LinearSystem& system, int d, std::span<const ComplexFn> fs,
                                        const EvalMode& mode = {});

/// E[f|B]: the average of f over the atom of B containing x.
ComplexFn conditional_expectation(const ComplexFn& f, const PolynomialFactor& factor);

/// ||E[f|B]||_2^2.
double energy(const ComplexFn& f, const PolynomialFactor& factor);

struct InverseOptions {
  /// Largest number of nonlinear coefficient choices examined exhaustively;
  /// larger searches draw this many random choices instead.
  std::uint64_t budget = std::uint64_t{1} << 16;
  std::uint64_t seed = 0;
};

struct InverseWitness {
  MonomialRep poly;
  /// |E f(x) e(-P(x))|.
  double correlation = 0.0;
  bool exhaustive = true;
  std::uint64_t candidates = 0;
};

/// Searches for P of degree <= d maximising |E f(x) e(-P(x))|. Coefficients
/// of monomials of degree >= 2 are enumerated; the best linear depth-0 part
/// for each choice comes from a Fourier transform over F_p^n. Ties go to the
/// first candidate in enumeration order. Returns nothing when no candidate
/// has positive correlation.
std::optional<InverseWitness> inverse_oracle(const ComplexFn& f, int d, const InverseOptions& options = {});

/// Monomials of degree in [2, d] on F_p^n, in the oracle's enumeration order.
std::vector<Monomial> nonlinear_monomials(int p, int n, int d);

/// Fourier coefficients hat g(xi) = E_x g(x) e(-xi.x / p) for all xi.
std::vector<Complex> fourier_transform(const ComplexFn& g);

}  // namespace hofa
