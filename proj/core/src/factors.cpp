#include "hofa/factors.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hofa/caps.hpp"
#include "hofa/errors.hpp"

namespace hofa {

// ---------------------------------------------------------------------------
// PolynomialFactor

PolynomialFactor::PolynomialFactor(int p, int n) : p_(p), n_(n), params_(p) {
  if (n < 0) throw InvalidParameter("dimension must be nonnegative");
}

PolynomialFactor::PolynomialFactor(int p, int n, std::vector<HomogeneousPoly> polys)
    : PolynomialFactor(p, n) {
  std::stable_sort(polys.begin(), polys.end(),
                   [](const auto& a, const auto& b) { return a.type < b.type; });
  for (auto& hp : polys) {
    if (hp.poly.p() != p || hp.poly.dim() != n) {
      throw ShapeError("factor polynomial lives on a different space");
    }
    if (!in_domain(p, hp.type)) {
      throw InvalidParameter("factor polynomial type " + to_string(hp.type) + " is not in D_p");
    }
    const ValueTable t = hp.poly.table().normalized();
    if (t.depth() > hp.type.depth) {
      throw InvalidParameter("factor polynomial " + to_string(hp.poly) +
                             " takes values outside U_{k+1}");
    }
    tables_.push_back(t.embed(hp.type.depth));
    params_.set(hp.type, params_.count(hp.type) + 1);
    polys_.push_back(std::move(hp));
  }
}

Atom PolynomialFactor::atom(Point x) const {
  Atom a;
  a.residues.reserve(tables_.size());
  for (const auto& t : tables_) a.residues.push_back(t.residue(x));
  return a;
}

const std::vector<std::uint64_t>& PolynomialFactor::atom_ranks() const {
  if (!ranks_.empty()) return ranks_;
  params_.norm();
  const Space& s = cached_space(p_, n_);
  std::vector<std::uint64_t> r(s.size(), 0);
  for (std::size_t slot = 0; slot < tables_.size(); ++slot) {
    const auto m = static_cast<std::uint64_t>(tables_[slot].modulus());
    for (Point x = 0; x < s.size(); ++x) {
      r[x] = r[x] * m + static_cast<std::uint64_t>(tables_[slot].residue(x));
    }
  }
  ranks_ = std::move(r);
  return ranks_;
}

PolynomialFactor PolynomialFactor::refine_homogeneous(std::span<const HomogeneousPoly> polys) const {
  std::vector<HomogeneousPoly> all = polys_;
  std::vector<ValueTable> seen = tables_;
  for (const auto& hp : polys) {
    if (hp.type.degree == 0) continue;
    const ValueTable t = hp.poly.table();
    if (t.is_zero()) continue;
    bool duplicate = false;
    for (std::size_t i = 0; i < all.size() && !duplicate; ++i) {
      duplicate = all[i].type == hp.type && seen[i].same_function(t);
    }
    if (duplicate) continue;
    all.push_back(hp);
    seen.push_back(t);
  }
  return PolynomialFactor(p_, n_, std::move(all));
}

PolynomialFactor PolynomialFactor::refine(std::span<const MonomialRep> polys) const {
  std::vector<HomogeneousPoly> parts;
  for (const auto& poly : polys) {
    if (poly.p() != p_ || poly.dim() != n_) throw ShapeError("refining polynomial on another space");
    for (auto& part : homogeneous_decomposition(poly)) parts.push_back(std::move(part));
  }
  return refine_homogeneous(parts);
}

PolynomialFactor PolynomialFactor::pad(int new_dim) const {
  std::vector<HomogeneousPoly> polys;
  for (const auto& hp : polys_) polys.push_back({hp.poly.embed_variables(new_dim, 0), hp.type});
  return PolynomialFactor(p_, new_dim, std::move(polys));
}

std::vector<ValueTable> PolynomialFactor::linear_tables() const {
  std::vector<ValueTable> out;
  for (std::size_t i = 0; i < polys_.size(); ++i) {
    if (polys_[i].type == DegreeDepth{1, 0}) out.push_back(tables_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Analytic rank

std::vector<std::uint64_t> derivative_histogram(const ValueTable& poly, int d) {
  if (d < 0) throw InvalidParameter("derivative order must be nonnegative");
  const ValueTable base = poly.normalized();
  const int p = base.p();
  const Space& s = cached_space(p, base.dim());
  const std::uint64_t n = s.size();
  require_within_cap(saturating_pow(n, static_cast<unsigned>(d) + 1), "derivative histogram");

  std::unordered_map<ValueTable, std::uint64_t, ValueTableHash> level{{base, 1}};
  for (int j = 0; j < d; ++j) {
    std::unordered_map<ValueTable, std::uint64_t, ValueTableHash> next;
    for (const auto& [t, c] : level) {
      for (Point h = 0; h < s.size(); ++h) next[derivative(t, h).normalized()] += c;
    }
    level = std::move(next);
  }
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(base.modulus()), 0);
  for (const auto& [t, c] : level) {
    const ValueTable e = t.embed(base.depth());
    for (Point x = 0; x < s.size(); ++x) hist[static_cast<std::size_t>(e.residue(x))] += c;
  }
  return hist;
}

bool cyclotomic_sum_is_zero(const std::vector<std::uint64_t>& hist, int p) {
  const std::size_t m = hist.size();
  if (m == 1) return hist[0] == 0;
  const std::size_t q = m / static_cast<std::size_t>(p);
  for (std::size_t r0 = 0; r0 < q; ++r0) {
    for (int t = 1; t < p; ++t) {
      if (hist[r0 + t * q] != hist[r0]) return false;
    }
  }
  return true;
}

std::complex<double> cyclotomic_mean(const std::vector<std::uint64_t>& hist) {
  long double re = 0, im = 0, total = 0;
  const long double m = static_cast<long double>(hist.size());
  for (std::size_t r = 0; r < hist.size(); ++r) {
    if (hist[r] == 0) continue;
    const long double angle = 2.0L * std::numbers::pi_v<long double> * r / m;
    re += hist[r] * std::cos(angle);
    im += hist[r] * std::sin(angle);
    total += hist[r];
  }
  return {static_cast<double>(re / total), static_cast<double>(im / total)};
}

namespace {

double rank_from_bias(double bias, int p) {
  return std::max(0.0, -std::log(bias) / std::log(static_cast<double>(p)));
}

}  // namespace

RankEstimate analytic_rank(const ValueTable& poly, int d, const EvalMode& mode) {
  RankEstimate est;
  const int p = poly.p();
  if (mode.exact) {
    const auto hist = derivative_histogram(poly, d);
    if (cyclotomic_sum_is_zero(hist, p)) {
      est.infinite = true;
      return est;
    }
    est.bias = std::abs(cyclotomic_mean(hist));
    est.value = rank_from_bias(est.bias, p);
    est.ci_low = est.ci_high = est.value;
    return est;
  }

  if (mode.samples == 0) throw InvalidParameter("sampled mode needs a positive sample count");
  const ValueTable t = poly.normalized();
  const Space& s = cached_space(p, t.dim());
  const std::int64_t mod = t.modulus();
  Rng rng(mode.seed);
  long double re = 0, im = 0, re2 = 0, im2 = 0;
  std::vector<Point> h(d);
  for (std::uint64_t i = 0; i < mode.samples; ++i) {
    const Point x = static_cast<Point>(rng.below(s.size()));
    for (auto& hj : h) hj = static_cast<Point>(rng.below(s.size()));
    std::int64_t v = 0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      Point y = x;
      for (int j = 0; j < d; ++j) {
        if (mask & (1u << j)) y = s.add(y, h[j]);
      }
      const int sign = ((d - std::popcount(mask)) % 2 == 0) ? 1 : -1;
      v += sign * t.residue(y);
    }
    const long double angle = 2.0L * std::numbers::pi_v<long double> * mod_floor(v, mod) / mod;
    re += std::cos(angle);
    im += std::sin(angle);
    re2 += std::cos(angle) * std::cos(angle);
    im2 += std::sin(angle) * std::sin(angle);
  }
  const long double n = static_cast<long double>(mode.samples);
  const double mre = static_cast<double>(re / n), mim = static_cast<double>(im / n);
  const double var = static_cast<double>((re2 + im2) / n) - (mre * mre + mim * mim);
  const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  est.exact = false;
  est.bias = std::hypot(mre, mim);
  est.value = rank_from_bias(std::max(est.bias, 1e-300), p);
  const double hi_bias = std::min(1.0, est.bias + 1.96 * se);
  const double lo_bias = est.bias - 1.96 * se;
  est.ci_low = rank_from_bias(hi_bias, p);
  est.ci_high = lo_bias <= 0 ? std::numeric_limits<double>::infinity() : rank_from_bias(lo_bias, p);
  return est;
}

FactorRank factor_rank(const PolynomialFactor& factor, std::uint64_t max_combinations,
                       std::uint64_t seed) {
  const auto& params = factor.params();
  FactorRank out;
  out.infinite = true;
  if (params.empty()) return out;
  const std::uint64_t total = params.norm() - 1;
  out.exhaustive = total <= max_combinations;
  const std::uint64_t count = out.exhaustive ? total : max_combinations;
  const int depth = [&] {
    int k = 0;
    for (const auto& [dk, c] : params.counts()) k = std::max(k, dk.depth);
    return k;
  }();
  Rng rng(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t rank = out.exhaustive ? i + 1 : 1 + rng.below(total);
    const Atom lambda = atom_unrank(params, rank);
    ValueTable q = ValueTable::zero(factor.p(), factor.dim(), depth);
    for (std::size_t s = 0; s < factor.tables().size(); ++s) {
      if (lambda.residues[s] != 0) q = q + factor.tables()[s].zmul(lambda.residues[s]).embed(depth);
    }
    ++out.combinations_tested;
    const int deg = interpolate(q).degree_depth().degree;
    const RankEstimate est = deg == 0 ? RankEstimate{} : analytic_rank(q, deg);
    if (est.infinite) continue;
    if (out.infinite || est.value < out.min_rank) {
      out.infinite = false;
      out.min_rank = est.value;
      out.argmin = lambda.residues;
    }
    if (out.min_rank == 0.0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// High-rank construction

HomogeneousPoly high_rank_block(int p, DegreeDepth dk) {
  if (!in_domain(p, dk)) throw InvalidParameter(to_string(dk) + " is not in D_p");
  const int b = (dk.degree - 1) % (p - 1) + 1;
  const int a = (dk.degree - b) / (p - 1) - dk.depth;
  MonomialRep seed(p, a + 1);
  Monomial m{std::vector<int>(a + 1, p - 1), dk.depth};
  m.exps[a] = b;
  seed.set_term(m, 1);
  for (auto& part : homogeneous_decomposition(seed)) {
    if (part.type == dk) return part;
  }
  throw InternalError("seed monomial has no homogeneous part of type " + to_string(dk));
}

HighRankFactor build_high_rank_factor(const ParameterList& params, double r, int max_copies) {
  const int p = params.p();
  HighRankFactor out;
  struct Plan {
    DegreeDepth dk;
    HomogeneousPoly block;
    int copies;
  };
  std::vector<Plan> plans;
  int n = 0;
  for (const auto& [dk, count] : params.counts()) {
    HomogeneousPoly block = high_rank_block(p, dk);
    const RankEstimate est = analytic_rank(block.poly.table(), dk.degree);
    int copies = 1;
    if (!est.infinite) {
      if (est.value <= 0) {
        throw InternalError("high-rank block of type " + to_string(dk) + " has zero rank");
      }
      copies = std::max(1, static_cast<int>(std::ceil(r / est.value - 1e-9)));
      if (copies > max_copies) {
        throw CapExceeded("reaching rank " + std::to_string(r) + " for " + to_string(dk) + " needs " +
                          std::to_string(copies) + " copies; achieved rank with " +
                          std::to_string(max_copies) + " copies is " +
                          std::to_string(max_copies * est.value));
      }
    }
    out.copies[dk] = copies;
    out.block_rank[dk] = est.infinite ? std::numeric_limits<double>::infinity() : est.value;
    out.achieved_rank[dk] =
        est.infinite ? std::numeric_limits<double>::infinity() : copies * est.value;
    n += count * copies * block.poly.dim();
    plans.push_back({dk, std::move(block), copies});
  }

  std::vector<HomogeneousPoly> polys;
  int offset = 0;
  for (const auto& plan : plans) {
    const int width = plan.block.poly.dim();
    for (int slot = 0; slot < params.count(plan.dk); ++slot) {
      MonomialRep sum(p, n);
      for (int c = 0; c < plan.copies; ++c) {
        const MonomialRep shifted = plan.block.poly.embed_variables(n, offset);
        for (const auto& [m, coef] : shifted.terms()) sum.set_term(m, coef);
        offset += width;
      }
      polys.push_back({std::move(sum), plan.dk});
    }
  }
  out.factor = PolynomialFactor(p, n, std::move(polys));
  return out;
}

// ---------------------------------------------------------------------------
// Subatom selectors

SubatomSelector::SubatomSelector(ParameterList source, ParameterList target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (!source_.is_le(target_)) throw InvalidParameter("selector source must be below its target");
  const int lin = source_.count({1, 0});
  for (const auto& [dk, c] : target_.counts()) {
    const int extra = c - source_.count(dk);
    if (extra > 0) {
      coeffs_[dk] = std::vector<std::vector<std::int64_t>>(extra, std::vector<std::int64_t>(lin, 0));
    }
  }
}

SubatomSelector SubatomSelector::random(const ParameterList& source, const ParameterList& target,
                                        Rng& rng) {
  SubatomSelector s(source, target);
  for (auto& [dk, rows] : s.coeffs_) {
    const auto m = static_cast<std::uint64_t>(checked_pow(source.p(), dk.depth + 1));
    for (auto& row : rows) {
      for (auto& c : row) c = static_cast<std::int64_t>(rng.below(m));
    }
  }
  return s;
}

std::int64_t SubatomSelector::coefficient(DegreeDepth dk, int i, int j) const {
  const auto it = coeffs_.find(dk);
  const int base = source_.count(dk);
  if (it == coeffs_.end() || i <= base || i - base > static_cast<int>(it->second.size()) || j < 1 ||
      j > source_.count({1, 0})) {
    throw ShapeError("selector coefficient index out of range");
  }
  return it->second[i - base - 1][j - 1];
}

void SubatomSelector::set_coefficient(DegreeDepth dk, int i, int j, std::int64_t c) {
  coefficient(dk, i, j);
  coeffs_[dk][i - source_.count(dk) - 1][j - 1] = mod_floor(c, checked_pow(source_.p(), dk.depth + 1));
}

Atom SubatomSelector::apply(const Atom& a) const {
  if (static_cast<int>(a.residues.size()) != source_.total_slots()) {
    throw ShapeError("atom does not match the selector source");
  }
  const int p = source_.p();
  const int lin = source_.count({1, 0});
  std::vector<int> lin_values(lin);
  for (int j = 0; j < lin; ++j) lin_values[j] = static_cast<int>(a.residues[j]);

  Atom out;
  int src = 0;
  for (const auto& [dk, c] : target_.counts()) {
    const int keep = source_.count(dk);
    for (int i = 0; i < keep; ++i) out.residues.push_back(a.residues[src + i]);
    src += keep;
    const auto it = coeffs_.find(dk);
    if (it == coeffs_.end()) continue;
    const std::int64_t mod = checked_pow(p, dk.depth + 1);
    const ValueTable pt = univariate_homogeneous(p, dk.degree, dk.depth).poly.table().normalized().embed(dk.depth);
    for (const auto& row : it->second) {
      std::int64_t v = 0;
      for (int j = 0; j < lin; ++j) v = mod_floor(v + mul_mod(row[j], pt.residue(lin_values[j]), mod), mod);
      out.residues.push_back(v);
    }
  }
  return out;
}

}  // namespace hofa
