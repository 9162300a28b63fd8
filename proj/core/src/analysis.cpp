#include "hofa/analysis.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hofa/caps.hpp"
#include "hofa/errors.hpp"
#include "hofa/rng.hpp"
#include "hofa/stats.hpp"

namespace hofa {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Complex unit_root(std::int64_t r, std::int64_t mod) {
  const double angle = two_pi * static_cast<double>(r) / static_cast<double>(mod);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

ComplexFn::ComplexFn(int p, int n) : p_(p), n_(n) {
  values_.assign(cached_space(p, n).size(), Complex(0.0, 0.0));
}

ComplexFn::ComplexFn(int p, int n, std::vector<Complex> values) : p_(p), n_(n), values_(std::move(values)) {
  if (values_.size() != cached_space(p, n).size()) throw ShapeError("function length must be p^n");
}

ComplexFn ComplexFn::constant(int p, int n, Complex c) {
  ComplexFn f(p, n);
  std::fill(f.values_.begin(), f.values_.end(), c);
  if (c == Complex(1.0, 0.0) || c == Complex(0.0, 0.0)) {
    f.indicator_ = std::vector<std::uint8_t>(f.values_.size(), c == Complex(1.0, 0.0) ? 1 : 0);
  }
  return f;
}

ComplexFn ComplexFn::from_real(int p, int n, std::span<const double> values) {
  std::vector<Complex> v(values.begin(), values.end());
  ComplexFn f(p, n, std::move(v));
  const bool binary = std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0 || x == 1.0; });
  if (binary) {
    std::vector<std::uint8_t> mask(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] == 1.0 ? 1 : 0;
    f.indicator_ = std::move(mask);
  }
  return f;
}

ComplexFn ComplexFn::indicator(int p, int n, std::span<const std::uint8_t> mask) {
  std::vector<Complex> v(mask.size());
  std::vector<std::uint8_t> m(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    m[i] = mask[i] != 0 ? 1 : 0;
    v[i] = m[i] ? 1.0 : 0.0;
  }
  ComplexFn f(p, n, std::move(v));
  f.indicator_ = std::move(m);
  return f;
}

ComplexFn ComplexFn::phase(const ValueTable& poly) {
  const std::int64_t mod = poly.modulus();
  std::vector<Complex> v(poly.size());
  for (Point x = 0; x < poly.size(); ++x) v[x] = unit_root(poly.residue(x), mod);
  ComplexFn f(poly.p(), poly.dim(), std::move(v));
  f.phase_ = poly;
  return f;
}

Complex& ComplexFn::at(Point x) {
  indicator_.reset();
  phase_.reset();
  return values_.at(x);
}

double ComplexFn::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s = std::max(s, std::abs(v));
  return s;
}

bool ComplexFn::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](const Complex& v) { return std::abs(v.imag()) <= tol; });
}

bool ComplexFn::in_range(double lo, double hi, double tol) const {
  return std::all_of(values_.begin(), values_.end(), [&](const Complex& v) {
    return std::abs(v.imag()) <= tol && v.real() >= lo - tol && v.real() <= hi + tol;
  });
}

Complex ComplexFn::mean() const {
  Complex s = 0.0;
  for (const auto& v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double ComplexFn::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(values_.size()));
}

ComplexFn ComplexFn::conj() const {
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(values_[i]);
  ComplexFn f(p_, n_, std::move(v));
  f.indicator_ = indicator_;
  if (phase_) f.phase_ = phase_->zmul(-1);
  return f;
}

ComplexFn ComplexFn::multiplicative_derivative(Point h) const {
  const Space& s = cached_space(p_, n_);
  std::vector<Complex> v(values_.size());
  for (Point x = 0; x < size(); ++x) v[x] = values_[s.add(x, h)] * std::conj(values_[x]);
  ComplexFn f(p_, n_, std::move(v));
  if (indicator_) {
    std::vector<std::uint8_t> m(values_.size());
    for (Point x = 0; x < size(); ++x) m[x] = (*indicator_)[s.add(x, h)] & (*indicator_)[x];
    f.indicator_ = std::move(m);
  }
  if (phase_) f.phase_ = derivative(*phase_, h);
  return f;
}

void ComplexFn::check_compatible(const ComplexFn& o) const {
  if (p_ != o.p_ || n_ != o.n_) throw ShapeError("functions live on different spaces");
}

ComplexFn operator+(const ComplexFn& a, const ComplexFn& b) {
  a.check_compatible(b);
  std::vector<Complex> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
  return ComplexFn(a.p_, a.n_, std::move(v));
}

ComplexFn operator-(const ComplexFn& a, const ComplexFn& b) {
  a.check_compatible(b);
  std::vector<Complex> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
  return ComplexFn(a.p_, a.n_, std::move(v));
}

ComplexFn operator*(const ComplexFn& a, const ComplexFn& b) {
  a.check_compatible(b);
  std::vector<Complex> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
  return ComplexFn(a.p_, a.n_, std::move(v));
}

ComplexFn ComplexFn::scaled(Complex c) const {
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * c;
  return ComplexFn(p_, n_, std::move(v));
}

double ComplexFn::distance(const ComplexFn& o) const {
  check_compatible(o);
  double d = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - o.values_[i]));
  return d;
}

namespace {

/// E_{x,h_1..h_d} (Delta_{h_1}...Delta_{h_d} f)(x) by recursion on d.
Complex gowers_power(const std::vector<Complex>& f, const Space& s, int d) {
  if (d == 1) {
    Complex m = 0.0;
    for (const auto& v : f) m += v;
    m /= static_cast<double>(f.size());
    return std::norm(m);
  }
  Complex total = 0.0;
  std::vector<Complex> g(f.size());
  for (Point h = 0; h < s.size(); ++h) {
    for (Point x = 0; x < s.size(); ++x) g[x] = f[s.add(x, h)] * std::conj(f[x]);
    total += gowers_power(g, s, d - 1);
  }
  return total / static_cast<double>(s.size());
}

double root_of_power(double power, int d) {
  return std::pow(std::max(power, 0.0), 1.0 / static_cast<double>(1u << d));
}

}  // namespace

GowersResult gowers_norm(const ComplexFn& f, int d, const EvalMode& mode) {
  if (d < 1) throw InvalidParameter("Gowers norms are defined for d >= 1");
  if (d > 20) throw InvalidParameter("Gowers order too large");
  const Space& s = cached_space(f.p(), f.dim());
  GowersResult r;
  if (mode.exact) {
    require_within_cap(saturating_pow(s.size(), static_cast<unsigned>(d) + 1), "exact Gowers norm");
    if (f.phase_source()) {
      const auto hist = derivative_histogram(*f.phase_source(), d);
      r.power = cyclotomic_sum_is_zero(hist, f.p()) ? Complex(0.0, 0.0) : cyclotomic_mean(hist);
    } else {
      r.power = gowers_power(f.values(), s, d);
    }
    r.value = root_of_power(r.power.real(), d);
    r.ci_low = r.ci_high = r.value;
    return r;
  }

  if (mode.samples == 0) throw InvalidParameter("sampled mode needs a positive sample count");
  Rng rng(mode.seed);
  std::vector<Point> h(static_cast<std::size_t>(d));
  long double sum_re = 0, sum_im = 0, sum_re2 = 0;
  for (std::uint64_t i = 0; i < mode.samples; ++i) {
    const Point x = static_cast<Point>(rng.below(s.size()));
    for (auto& hj : h) hj = static_cast<Point>(rng.below(s.size()));
    Complex prod = 1.0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      Point y = x;
      for (int j = 0; j < d; ++j) {
        if (mask & (1u << j)) y = s.add(y, h[static_cast<std::size_t>(j)]);
      }
      // Vertices at odd distance from the top corner are conjugated.
      const bool conj = (d - std::popcount(mask)) % 2 == 1;
      prod *= conj ? std::conj(f[y]) : f[y];
    }
    sum_re += prod.real();
    sum_im += prod.imag();
    sum_re2 += prod.real() * prod.real();
  }
  const long double n = static_cast<long double>(mode.samples);
  const double mean = static_cast<double>(sum_re / n);
  const double var = static_cast<double>(sum_re2 / n) - mean * mean;
  const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  r.exact = false;
  r.samples = mode.samples;
  r.power = Complex(mean, static_cast<double>(sum_im / n));
  r.value = root_of_power(mean, d);
  r.ci_low = root_of_power(mean - z95 * se, d);
  r.ci_high = std::min(1.0, root_of_power(mean + z95 * se, d));
  return r;
}

LambdaResult lambda_density(const LinearSystem& system, std::span<const ComplexFn> fs, const EvalMode& mode) {
  system.validate();
  const int m = system.size();
  if (static_cast<int>(fs.size()) != m) throw ShapeError("one function per linear form is required");
  if (m == 0) throw InvalidParameter("the system has no forms");
  const int p = fs[0].p();
  const int n = fs[0].dim();
  if (p != system.p) throw ShapeError("functions and system use different primes");
  for (const auto& f : fs) {
    if (f.p() != p || f.dim() != n) throw ShapeError("functions live on different spaces");
  }
  const Space& s = cached_space(p, n);
  const int ell = system.vars;
  const auto& rows = system.rows;
  LambdaResult r;
  r.denominator = saturating_pow(s.size(), static_cast<unsigned>(ell));

  if (mode.exact) {
    require_within_cap(saturating_mul(r.denominator, static_cast<std::uint64_t>(m)), "exact Lambda density");
    const bool indicators =
        std::all_of(fs.begin(), fs.end(), [](const ComplexFn& f) { return f.indicator_source().has_value(); });
    // Depth-first over x_1..x_ell carrying the partial values of every form.
    std::vector<std::vector<Point>> partial(static_cast<std::size_t>(ell) + 1, std::vector<Point>(m, 0));
    std::uint64_t count = 0;
    Complex total = 0.0;
    std::function<void(int)> dfs = [&](int j) {
      if (j == ell) {
        if (indicators) {
          for (int i = 0; i < m; ++i) {
            if (!(*fs[i].indicator_source())[partial[j][i]]) return;
          }
          ++count;
        } else {
          Complex prod = 1.0;
          for (int i = 0; i < m; ++i) prod *= fs[i][partial[j][i]];
          total += prod;
        }
        return;
      }
      for (Point x = 0; x < s.size(); ++x) {
        for (int i = 0; i < m; ++i) {
          const int c = rows[i][j];
          partial[j + 1][i] = c == 0 ? partial[j][i] : s.add(partial[j][i], s.scale(c, x));
        }
        dfs(j + 1);
      }
    };
    dfs(0);
    if (indicators) {
      r.count = count;
      r.value = static_cast<double>(count) / static_cast<double>(r.denominator);
    } else {
      r.value = total / static_cast<double>(r.denominator);
    }
    r.ci_low = r.ci_high = r.value.real();
    return r;
  }

  if (mode.samples == 0) throw InvalidParameter("sampled mode needs a positive sample count");
  Rng rng(mode.seed);
  std::vector<Point> x(static_cast<std::size_t>(ell));
  long double sum_re = 0, sum_im = 0, sum_re2 = 0;
  for (std::uint64_t t = 0; t < mode.samples; ++t) {
    for (auto& xj : x) xj = static_cast<Point>(rng.below(s.size()));
    const auto pts = evaluate(system, s, x);
    Complex prod = 1.0;
    for (int i = 0; i < m; ++i) prod *= fs[i][pts[i]];
    sum_re += prod.real();
    sum_im += prod.imag();
    sum_re2 += prod.real() * prod.real();
  }
  const long double n_s = static_cast<long double>(mode.samples);
  const double mean = static_cast<double>(sum_re / n_s);
  const double var = static_cast<double>(sum_re2 / n_s) - mean * mean;
  const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_s));
  r.exact = false;
  r.value = Complex(mean, static_cast<double>(sum_im / n_s));
  r.ci_low = mean - z95 * se;
  r.ci_high = mean + z95 * se;
  return r;
}

CountingProbe counting_lemma_deficiency(const LinearSystem& system, int d, std::span<const ComplexFn> fs,
                                        const EvalMode& mode) {
  CountingProbe probe;
  probe.lambda = lambda_density(system, fs, mode).value;
  probe.min_norm = 1.0;
  bool first = true;
  for (const auto& f : fs) {
    const double v = gowers_norm(f, d + 1, mode).value;
    probe.min_norm = first ? v : std::min(probe.min_norm, v);
    first = false;
  }
  return probe;
}

ComplexFn conditional_expectation(const ComplexFn& f, const PolynomialFactor& factor) {
  if (f.p() != factor.p() || f.dim() != factor.dim()) throw ShapeError("function and factor live on different spaces");
  const auto& ranks = factor.atom_ranks();
  std::unordered_map<std::uint64_t, std::pair<Complex, std::uint64_t>> sums;
  for (Point x = 0; x < f.size(); ++x) {
    auto& e = sums[ranks[x]];
    e.first += f[x];
    ++e.second;
  }
  std::vector<Complex> v(f.size());
  for (Point x = 0; x < f.size(); ++x) {
    const auto& e = sums[ranks[x]];
    v[x] = e.first / static_cast<double>(e.second);
  }
  return ComplexFn(f.p(), f.dim(), std::move(v));
}

double energy(const ComplexFn& f, const PolynomialFactor& factor) {
  const double n = conditional_expectation(f, factor).l2_norm();
  return n * n;
}

std::vector<Complex> fourier_transform(const ComplexFn& g) {
  const int p = g.p();
  const int n = g.dim();
  std::vector<Complex> a = g.values();
  std::vector<Complex> roots(static_cast<std::size_t>(p));
  for (int r = 0; r < p; ++r) roots[r] = unit_root(-r, p);
  std::vector<Complex> buf(static_cast<std::size_t>(p));
  Point stride = 1;
  for (int axis = 0; axis < n; ++axis) {
    const Point block = stride * static_cast<Point>(p);
    for (Point base = 0; base < a.size(); base += block) {
      for (Point off = 0; off < stride; ++off) {
        for (int xi = 0; xi < p; ++xi) {
          Complex acc = 0.0;
          for (int x = 0; x < p; ++x) acc += a[base + off + static_cast<Point>(x) * stride] * roots[(xi * x) % p];
          buf[xi] = acc;
        }
        for (int xi = 0; xi < p; ++xi) a[base + off + static_cast<Point>(xi) * stride] = buf[xi];
      }
    }
    stride = block;
  }
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
  return a;
}

std::vector<Monomial> nonlinear_monomials(int p, int n, int d) {
  std::vector<Monomial> out;
  if (d < 2) return out;
  const int top = max_depth(p, d);
  for (int k = 0; k <= top; ++k) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    while (true) {
      int sum = 0;
      for (int v : e) sum += v;
      const int w = sum + k * (p - 1);
      if (sum > 0 && w >= 2 && w <= d) out.push_back(Monomial{e, k});
      int pos = 0;
      while (pos < n && ++e[static_cast<std::size_t>(pos)] == p) e[static_cast<std::size_t>(pos++)] = 0;
      if (pos == n) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<InverseWitness> inverse_oracle(const ComplexFn& f, int d, const InverseOptions& options) {
  if (d < 1) throw InvalidParameter("the inverse oracle needs d >= 1");
  if (!f.is_bounded(1e-9)) throw InvalidParameter("the inverse oracle needs ||f||_inf <= 1");
  const int p = f.p();
  const int n = f.dim();
  const auto monos = nonlinear_monomials(p, n, d);
  const int depth = monos.empty() ? 0 : max_depth(p, d);
  const std::int64_t mod = checked_pow(p, depth + 1);
  std::vector<std::vector<std::int64_t>> tables;
  for (const auto& mono : monos) {
    MonomialRep rep(p, n);
    rep.set_term(mono, 1);
    tables.push_back(rep.table().embed(depth).residues());
  }
  std::vector<Complex> phases(static_cast<std::size_t>(mod));
  for (std::int64_t r = 0; r < mod; ++r) phases[static_cast<std::size_t>(r)] = unit_root(-r, mod);

  const std::uint64_t total = saturating_pow(static_cast<std::uint64_t>(p), static_cast<unsigned>(monos.size()));
  const bool exhaustive = total <= options.budget;
  const std::uint64_t count = exhaustive ? total : options.budget;
  require_within_cap(saturating_mul(count, saturating_mul(f.size(), static_cast<std::uint64_t>(n * p + monos.size()))),
                     "inverse oracle search");

  Rng rng(options.seed);
  std::vector<int> coeffs(monos.size(), 0);
  std::vector<int> best_coeffs;
  Point best_xi = 0;
  double best = 0.0;
  std::vector<std::int64_t> q(f.size());
  for (std::uint64_t c = 0; c < count; ++c) {
    if (exhaustive) {
      std::uint64_t rest = c;
      for (auto& v : coeffs) {
        v = static_cast<int>(rest % static_cast<std::uint64_t>(p));
        rest /= static_cast<std::uint64_t>(p);
      }
    } else {
      for (auto& v : coeffs) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
    }
    std::fill(q.begin(), q.end(), 0);
    for (std::size_t t = 0; t < monos.size(); ++t) {
      if (coeffs[t] == 0) continue;
      for (Point x = 0; x < f.size(); ++x) q[x] += coeffs[t] * tables[t][x];
    }
    std::vector<Complex> g(f.size());
    for (Point x = 0; x < f.size(); ++x) g[x] = f[x] * phases[static_cast<std::size_t>(mod_floor(q[x], mod))];
    const auto hat = fourier_transform(ComplexFn(p, n, std::move(g)));
    for (Point xi = 0; xi < hat.size(); ++xi) {
      const double v = std::abs(hat[xi]);
      if (v > best + 1e-12) {
        best = v;
        best_xi = xi;
        best_coeffs = coeffs;
      }
    }
  }
  if (best <= 1e-12) return std::nullopt;

  InverseWitness w;
  w.poly = MonomialRep(p, n);
  for (std::size_t t = 0; t < monos.size(); ++t) {
    if (best_coeffs[t] != 0) w.poly.set_term(monos[t], best_coeffs[t]);
  }
  const Space& s = cached_space(p, n);
  for (int j = 0; j < n; ++j) {
    const int c = s.coord(best_xi, j);
    if (c == 0) continue;
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(j)] = 1;
    w.poly.set_term(Monomial{e, 0}, c);
  }
  w.correlation = best;
  w.exhaustive = exhaustive;
  w.candidates = count;
  return w;
}

}  // namespace hofa
