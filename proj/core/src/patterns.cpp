#include "hofa/patterns.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "hofa/caps.hpp"
#include "hofa/consistency.hpp"
#include "hofa/rng.hpp"
#include "hofa/stats.hpp"
#include "instances.hpp"

namespace hofa {

// ---------------------------------------------------------------------------
// Instance enumeration

namespace detail {

std::uint64_t enumerate_instances(const Space& space, const LinearSystem& system, bool generic,
                                  const std::function<bool(int form, Point value)>& accept,
                                  const std::function<bool(const std::vector<Point>& x)>& visit) {
  system.validate();
  if (system.p != space.p()) throw ShapeError("pattern and coloring over different primes");
  const int ell = system.vars;
  require_within_cap(saturating_pow(space.size(), static_cast<unsigned>(ell)), "pattern instance enumeration");

  // Forms grouped by the last variable they depend on; constant forms first.
  std::vector<std::vector<int>> by_last(static_cast<std::size_t>(ell));
  for (int i = 0; i < system.size(); ++i) {
    int last = -1;
    for (int v = 0; v < ell; ++v) {
      if (mod_floor(system.rows[i][v], system.p) != 0) last = v;
    }
    if (last < 0) {
      if (!accept(i, 0)) return 0;
    } else {
      by_last[last].push_back(i);
    }
  }

  std::vector<Point> x(static_cast<std::size_t>(ell), 0);
  std::vector<IncrementalBasis> bases;
  if (generic) {
    if (ell > space.dim()) return 0;
    bases.assign(static_cast<std::size_t>(ell) + 1, IncrementalBasis(space.p(), space.dim()));
  }
  std::uint64_t visited = 0;
  bool stop = false;
  std::function<void(int)> step = [&](int j) {
    if (j == ell) {
      ++visited;
      if (!visit(x)) stop = true;
      return;
    }
    for (Point v = 0; v < space.size() && !stop; ++v) {
      if (generic) {
        bases[j + 1] = bases[j];
        if (!bases[j + 1].add(space.coords(v))) continue;
      }
      x[j] = v;
      bool ok = true;
      for (int i : by_last[j]) {
        const auto& row = system.rows[i];
        Point value = 0;
        for (int u = 0; u <= j; ++u) {
          const int c = static_cast<int>(mod_floor(row[u], system.p));
          if (c != 0) value = space.add(value, space.scale(c, x[u]));
        }
        if (!accept(i, value)) {
          ok = false;
          break;
        }
      }
      if (ok) step(j + 1);
    }
  };
  step(0);
  return visited;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ColorSet

ColorSet::ColorSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw InvalidParameter("a color set needs at least one color");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw InvalidParameter("color names must be distinct");
}

ColorSet::ColorSet(int p, std::vector<std::string> labels, std::vector<std::vector<int>> action)
    : ColorSet(std::move(labels)) {
  require_prime(p);
  const int r = size();
  if (static_cast<int>(action.size()) != p - 1) {
    throw ShapeError("a color action needs one row per unit of F_p");
  }
  for (const auto& row : action) {
    if (static_cast<int>(row.size()) != r) throw ShapeError("color action row has the wrong length");
    std::vector<bool> hit(static_cast<std::size_t>(r), false);
    for (int c : row) {
      if (c < 0 || c >= r || hit[c]) throw InvalidParameter("color action rows must be permutations");
      hit[c] = true;
    }
  }
  for (int c = 0; c < r; ++c) {
    if (action[0][c] != c) throw InvalidParameter("1 must act as the identity on colors");
  }
  for (int b = 1; b < p; ++b) {
    for (int b2 = 1; b2 < p; ++b2) {
      const int bb = (b * b2) % p;
      for (int c = 0; c < r; ++c) {
        if (action[b - 1][action[b2 - 1][c]] != action[bb - 1][c]) {
          throw InvalidParameter("color action is not compatible with multiplication in F_p^x");
        }
      }
    }
  }
  action_p_ = p;
  action_ = std::move(action);
}

ColorSet ColorSet::numbered(int r) {
  if (r < 1) throw InvalidParameter("a color set needs at least one color");
  std::vector<std::string> labels;
  for (int c = 0; c < r; ++c) labels.push_back(std::to_string(c));
  return ColorSet(std::move(labels));
}

const std::string& ColorSet::label(int c) const {
  if (c < 0 || c >= size()) throw InvalidParameter("color index out of range");
  return labels_[c];
}

std::optional<int> ColorSet::find(std::string_view name) const {
  for (int c = 0; c < size(); ++c) {
    if (labels_[c] == name) return c;
  }
  return std::nullopt;
}

int ColorSet::act(int b, int c) const {
  if (c < 0 || c >= size()) throw InvalidParameter("color index out of range");
  if (action_.empty()) return c;
  const int bb = static_cast<int>(mod_floor(b, action_p_));
  if (bb == 0) throw InvalidParameter("only units of F_p act on colors");
  return action_[bb - 1][c];
}

// ---------------------------------------------------------------------------
// Coloring

Coloring::Coloring(int p, int n, ColorSet colors, std::vector<int> values)
    : p_(p), n_(n), colors_(std::move(colors)), values_(std::move(values)) {
  require_prime(p);
  if (n < 0) throw InvalidParameter("dimension must be nonnegative");
  if (colors_.size() == 0) throw InvalidParameter("a coloring needs at least one color");
  if (colors_.has_action() && colors_.action_prime() != p) {
    throw ShapeError("color action is over a different prime");
  }
  const auto expected = saturating_pow(static_cast<std::uint64_t>(p), static_cast<unsigned>(n));
  if (values_.size() != expected) {
    throw ShapeError("coloring has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(expected));
  }
  for (std::size_t x = 0; x < values_.size(); ++x) {
    if (values_[x] < 0 || values_[x] >= colors_.size()) {
      throw InvalidParameter("color index " + std::to_string(values_[x]) + " at point " + std::to_string(x) +
                             " is out of range");
    }
  }
}

Coloring Coloring::constant(int p, int n, ColorSet colors, int c) {
  const auto size = saturating_pow(static_cast<std::uint64_t>(p), static_cast<unsigned>(n));
  require_within_cap(size, "coloring size");
  return Coloring(p, n, std::move(colors), std::vector<int>(size, c));
}

void Coloring::set(Point x, int c) {
  if (x >= size()) throw InvalidParameter("point out of range");
  if (c < 0 || c >= colors_.size()) throw InvalidParameter("color index out of range");
  values_[x] = c;
}

std::optional<std::pair<int, Point>> Coloring::projectivity_violation() const {
  const Space& space = cached_space(p_, n_);
  for (int c = 1; c < p_; ++c) {
    for (Point x = 0; x < size(); ++x) {
      if (values_[space.scale(c, x)] != colors_.act(c, values_[x])) return std::make_pair(c, x);
    }
  }
  return std::nullopt;
}

bool Coloring::is_projective() const { return !projectivity_violation().has_value(); }

std::vector<std::uint8_t> Coloring::mask(int c) const {
  std::vector<std::uint8_t> m(values_.size());
  for (std::size_t x = 0; x < values_.size(); ++x) m[x] = values_[x] == c ? 1 : 0;
  return m;
}

ComplexFn Coloring::indicator(int c) const {
  const auto m = mask(c);
  return ComplexFn::indicator(p_, n_, m);
}

// ---------------------------------------------------------------------------
// Patterns

void ColoredPattern::validate(const ColorSet& colors) const {
  system.validate();
  if (static_cast<int>(psi.size()) != system.size()) {
    throw ShapeError("psi must assign a color to each of the " + std::to_string(system.size()) + " forms");
  }
  for (int c : psi) {
    if (c < 0 || c >= colors.size()) throw InvalidParameter("psi uses color index " + std::to_string(c));
  }
}

void LabeledPattern::validate(const ColorSet& colors) const {
  pattern.validate(colors);
  if (params.p() != pattern.system.p) throw ShapeError("labels and system over different primes");
  if (static_cast<int>(phi.size()) != pattern.system.size()) {
    throw ShapeError("phi must assign an atom to each form");
  }
  const auto slots = params.slot_types();
  for (const auto& a : phi) {
    if (a.residues.size() != slots.size()) throw ShapeError("atom label has the wrong number of slots");
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto mod = checked_pow(params.p(), slots[s].depth + 1);
      if (a.residues[s] < 0 || a.residues[s] >= mod) throw InvalidParameter("atom label residue out of range");
    }
  }
}

bool is_independent_tuple(const Space& space, std::span<const Point> x) {
  IncrementalBasis basis(space.p(), space.dim());
  for (Point v : x) {
    if (!basis.add(space.coords(v))) return false;
  }
  return true;
}

namespace {

void check_pattern_space(const Coloring& f, const ColoredPattern& h) {
  h.validate(f.colors());
  if (h.system.p != f.p()) throw ShapeError("pattern and coloring over different primes");
}

}  // namespace

PatternDensity pattern_density(const Coloring& f, const ColoredPattern& h, bool generic_only, const EvalMode& mode,
                               std::size_t max_witnesses) {
  check_pattern_space(f, h);
  const Space& space = cached_space(f.p(), f.dim());
  const int ell = h.system.vars;
  PatternDensity r;
  if (mode.exact) {
    r.total = saturating_pow(space.size(), static_cast<unsigned>(ell));
    r.count = detail::enumerate_instances(
        space, h.system, generic_only, [&](int i, Point v) { return f[v] == h.psi[i]; },
        [&](const std::vector<Point>& x) {
          if (r.witnesses.size() < max_witnesses) r.witnesses.push_back(x);
          return true;
        });
    r.density = static_cast<double>(r.count) / static_cast<double>(r.total);
    r.ci_low = r.ci_high = r.density;
    return r;
  }
  if (mode.samples == 0) throw InvalidParameter("sampled pattern density needs a positive sample count");
  r.exact = false;
  r.total = mode.samples;
  Rng rng(mode.seed);
  std::vector<Point> x(static_cast<std::size_t>(ell));
  for (std::uint64_t s = 0; s < mode.samples; ++s) {
    for (auto& v : x) v = static_cast<Point>(rng.below(space.size()));
    const auto values = evaluate(h.system, space, x);
    bool hit = true;
    for (int i = 0; i < h.system.size() && hit; ++i) hit = f[values[i]] == h.psi[i];
    if (hit && generic_only) hit = is_independent_tuple(space, x);
    if (hit) {
      ++r.count;
      if (r.witnesses.size() < max_witnesses) r.witnesses.push_back(x);
    }
  }
  r.density = static_cast<double>(r.count) / static_cast<double>(r.total);
  std::tie(r.ci_low, r.ci_high) = wilson_interval(r.count, r.total);
  return r;
}

std::uint64_t count_generic_instances(const Coloring& f, const ColoredPattern& h) {
  return pattern_density(f, h, true).count;
}

RelativeDensity labeled_relative_density(const Coloring& f, const PolynomialFactor& factor, const LabeledPattern& h,
                                         std::span<const std::uint8_t> region) {
  h.validate(f.colors());
  if (h.pattern.system.p != f.p() || factor.p() != f.p() || factor.dim() != f.dim()) {
    throw ShapeError("coloring, factor and pattern live on different spaces");
  }
  if (region.size() != f.size()) throw ShapeError("region mask has the wrong size");
  if (!(h.params == factor.params())) throw ShapeError("atom labels use different parameters than the factor");
  const Space& space = cached_space(f.p(), f.dim());
  const auto& ranks = factor.atom_ranks();
  std::vector<std::uint64_t> phi_ranks;
  for (const auto& a : h.phi) phi_ranks.push_back(atom_rank(h.params, a));

  RelativeDensity r;
  r.numerator = detail::enumerate_instances(
      space, h.pattern.system, false,
      [&](int i, Point v) { return region[v] != 0 && f[v] == h.pattern.psi[i] && ranks[v] == phi_ranks[i]; },
      [](const std::vector<Point>&) { return true; });
  r.denominator = detail::enumerate_instances(
      space, h.pattern.system, false, [&](int, Point v) { return region[v] != 0; },
      [](const std::vector<Point>&) { return true; });
  if (r.denominator != 0) r.value = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
  return r;
}

std::vector<std::uint8_t> atom_union_mask(const PolynomialFactor& factor, std::span<const Atom> atoms) {
  std::unordered_set<std::uint64_t> wanted;
  for (const auto& a : atoms) wanted.insert(atom_rank(factor.params(), a));
  const auto& ranks = factor.atom_ranks();
  std::vector<std::uint8_t> m(ranks.size());
  for (std::size_t x = 0; x < ranks.size(); ++x) m[x] = wanted.count(ranks[x]) ? 1 : 0;
  return m;
}

// ---------------------------------------------------------------------------
// Canonical colorings

CanonicalXi::CanonicalXi(int p, ParameterList params, ColorSet colors, std::vector<int> table)
    : p_(p), params_(std::move(params)), colors_(std::move(colors)), table_(std::move(table)) {
  require_prime(p);
  if (params_.p() != p) throw ShapeError("xi parameters over a different prime");
  if (colors_.has_action() && colors_.action_prime() != p) throw ShapeError("color action over a different prime");
  atoms_ = params_.norm();
  const auto expected = saturating_mul(static_cast<std::uint64_t>(p), atoms_);
  if (table_.size() != expected) throw ShapeError("xi table must have p * |A_I| entries");
  for (int c : table_) {
    if (c < 0 || c >= colors_.size()) throw InvalidParameter("xi uses a color outside S");
  }
}

CanonicalXi CanonicalXi::from_function(int p, const ParameterList& params, const ColorSet& colors,
                                       const std::function<int(int, const Atom&)>& fn) {
  const std::uint64_t atoms = params.norm();
  require_within_cap(saturating_mul(static_cast<std::uint64_t>(p), atoms), "canonical xi table");
  std::vector<int> table(static_cast<std::size_t>(p) * atoms);
  for (std::uint64_t r = 0; r < atoms; ++r) {
    const Atom a = atom_unrank(params, r);
    for (int x = 0; x < p; ++x) table[x * atoms + r] = fn(x, a);
  }
  return CanonicalXi(p, params, colors, std::move(table));
}

CanonicalXi CanonicalXi::constant(int p, const ParameterList& params, const ColorSet& colors, int c) {
  return from_function(p, params, colors, [c](int, const Atom&) { return c; });
}

int CanonicalXi::at(int x, std::uint64_t rank) const {
  if (x < 0 || x >= p_ || rank >= atoms_) throw InvalidParameter("xi argument out of range");
  return table_[static_cast<std::size_t>(x) * atoms_ + rank];
}

int CanonicalXi::operator()(int x, const Atom& a) const { return at(x, atom_rank(params_, a)); }

bool CanonicalXi::is_projective() const {
  for (std::uint64_t r = 0; r < atoms_; ++r) {
    const Atom a = atom_unrank(params_, r);
    for (int c = 1; c < p_; ++c) {
      const auto ca = atom_rank(params_, atom_act(params_, c, a));
      for (int x = 0; x < p_; ++x) {
        if (at((c * x) % p_, ca) != colors_.act(c, at(x, r))) return false;
      }
    }
  }
  return true;
}

bool CanonicalXi::attains(int c, const Atom& a) const {
  const auto r = atom_rank(params_, a);
  for (int x = 0; x < p_; ++x) {
    if (at(x, r) == c) return true;
  }
  return false;
}

bool CanonicalXi::attains(int c) const { return std::find(table_.begin(), table_.end(), c) != table_.end(); }

Coloring canonical_coloring(const CanonicalXi& xi, const PolynomialFactor& factor, const std::optional<FpMatrix>& iota) {
  if (factor.p() != xi.p()) throw ShapeError("xi and factor over different primes");
  if (!(factor.params() == xi.params())) throw ShapeError("xi and factor have different parameters");
  const int p = xi.p();
  const int n = factor.dim();
  if (iota) {
    if (static_cast<int>(iota->size()) != n) throw ShapeError("iota must be an n x n matrix");
    for (const auto& row : *iota) {
      if (static_cast<int>(row.size()) != n) throw ShapeError("iota must be an n x n matrix");
    }
    if (rank_mod_p(*iota, p) != n) throw InvalidParameter("iota must be invertible");
  }
  const Space& space = cached_space(p, n);
  const auto& ranks = factor.atom_ranks();
  std::vector<int> values(space.size());
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Point x = 0; x < space.size(); ++x) {
    int first = 0;
    if (iota) {
      const auto c = space.coords(x);
      for (int i = 0; i < n; ++i) {
        int acc = 0;
        for (int j = 0; j < n; ++j) acc = (acc + (*iota)[i][j] * c[j]) % p;
        y[i] = acc;
      }
      first = fnz(FpVector{p, y}).value;
    } else {
      first = space.fnz(x);
    }
    values[x] = xi.at(first, ranks[x]);
  }
  return Coloring(p, n, xi.colors(), std::move(values));
}

std::string to_string(InducesStatus status) {
  switch (status) {
    case InducesStatus::found:
      return "found";
    case InducesStatus::not_found:
      return "not_found";
    case InducesStatus::never:
      return "never";
  }
  return "unknown";
}

std::vector<PolynomialFactor> enumerate_factors(int p, int n, const ParameterList& params, std::uint64_t limit) {
  require_prime(p);
  if (params.p() != p) throw ShapeError("parameters over a different prime");
  if (params.empty()) return {PolynomialFactor(p, n)};
  if (n < 1 || limit == 0) return {};

  // Homogeneous polynomials of each exact type, vanishing at 0.
  std::map<DegreeDepth, std::vector<HomogeneousPoly>> candidates;
  for (const auto& [dk, count] : params.counts()) {
    if (count == 0) continue;
    const auto mod = checked_pow(p, dk.depth + 1);
    const Point size = cached_space(p, n).size();
    TupleGroup group(static_cast<int>(size), mod);
    for (const auto& g : witness_generators(p, n, dk, WitnessMode::strict)) {
      group.add_generator(Tuple(g.residues().begin(), g.residues().end()));
    }
    auto& list = candidates[dk];
    auto elements = group.elements();
    std::sort(elements.begin(), elements.end());
    for (const auto& e : elements) {
      const ValueTable t(p, n, dk.depth, std::vector<std::int64_t>(e.begin(), e.end()));
      if (t.is_zero()) continue;
      auto hp = certify_homogeneous(interpolate(t));
      if (hp && hp->type == dk) list.push_back(std::move(*hp));
    }
    if (static_cast<int>(list.size()) < count) return {};
  }

  // Strictly increasing choices within each type.
  std::vector<DegreeDepth> slots = params.slot_types();
  std::vector<std::size_t> idx(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    idx[s] = (s > 0 && slots[s - 1] == slots[s]) ? idx[s - 1] + 1 : 0;
  }
  std::vector<PolynomialFactor> out;
  while (out.size() < limit) {
    std::vector<HomogeneousPoly> polys;
    for (std::size_t s = 0; s < slots.size(); ++s) polys.push_back(candidates[slots[s]][idx[s]]);
    out.emplace_back(p, n, std::move(polys));
    // Advance the last slot that can move, then reset the later ones.
    int s = static_cast<int>(slots.size()) - 1;
    for (; s >= 0; --s) {
      const auto& list = candidates[slots[s]];
      int remaining = 0;
      for (std::size_t t = static_cast<std::size_t>(s) + 1; t < slots.size() && slots[t] == slots[s]; ++t) ++remaining;
      if (idx[s] + 1 + static_cast<std::size_t>(remaining) < list.size()) break;
    }
    if (s < 0) break;
    ++idx[s];
    for (std::size_t t = static_cast<std::size_t>(s) + 1; t < slots.size(); ++t) {
      idx[t] = (slots[t - 1] == slots[t]) ? idx[t - 1] + 1 : 0;
    }
  }
  return out;
}

InducesResult canonically_induces(const CanonicalXi& xi, const LabeledPattern& h, const InducesBudget& budget) {
  h.validate(xi.colors());
  if (h.params.p() != xi.p() || !(h.params == xi.params())) {
    throw ShapeError("pattern labels and xi use different parameters");
  }
  InducesResult result;
  for (int i = 0; i < h.pattern.system.size(); ++i) {
    if (!xi.attains(h.pattern.psi[i], h.phi[i])) {
      result.status = InducesStatus::never;
      return result;
    }
  }
  std::vector<std::uint64_t> phi_ranks;
  for (const auto& a : h.phi) phi_ranks.push_back(atom_rank(h.params, a));
  const int ell = h.pattern.system.vars;

  auto try_factor = [&](const PolynomialFactor& factor) {
    if (!(factor.params() == xi.params()) || factor.dim() < ell) return false;
    ++result.factors_tried;
    const Coloring coloring = canonical_coloring(xi, factor);
    const Space& space = cached_space(factor.p(), factor.dim());
    const auto& ranks = factor.atom_ranks();
    std::vector<Point> witness;
    try {
      detail::enumerate_instances(
          space, h.pattern.system, true,
          [&](int i, Point v) { return coloring[v] == h.pattern.psi[i] && ranks[v] == phi_ranks[i]; },
          [&](const std::vector<Point>& x) {
            witness = x;
            return false;
          });
    } catch (const CapExceeded&) {
      return false;
    }
    if (witness.empty()) return false;
    // Re-verify by direct evaluation.
    const auto values = evaluate(h.pattern.system, space, witness);
    for (int i = 0; i < h.pattern.system.size(); ++i) {
      if (coloring[values[i]] != h.pattern.psi[i] || factor.atom(values[i]) != h.phi[i]) {
        throw InternalError("canonically_induces witness failed re-verification");
      }
    }
    if (!is_independent_tuple(space, witness)) throw InternalError("canonically_induces witness is not generic");
    result.status = InducesStatus::found;
    result.factor = factor;
    result.witness = witness;
    return true;
  };

  for (const auto& factor : budget.extra_factors) {
    if (try_factor(factor)) return result;
  }
  for (int n = std::max(1, ell); n <= budget.n_max; ++n) {
    std::vector<PolynomialFactor> family;
    try {
      family = enumerate_factors(xi.p(), n, xi.params(), budget.max_factors_per_dim);
    } catch (const CapExceeded&) {
      continue;
    }
    for (const auto& factor : family) {
      if (try_factor(factor)) return result;
    }
  }
  if (!xi.params().empty()) {
    for (double r : budget.high_ranks) {
      std::optional<HighRankFactor> built;
      try {
        built = build_high_rank_factor(xi.params(), r);
      } catch (const Error&) {
        continue;
      }
      if (try_factor(built->factor)) return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Projectivization and distance

Coloring projectivize(const Coloring& f) {
  const int p = f.p();
  const int units = p - 1;
  const int r = f.colors().size();
  const std::uint64_t count = saturating_pow(static_cast<std::uint64_t>(r), static_cast<unsigned>(units));
  require_within_cap(saturating_mul(count, static_cast<std::uint64_t>(units)), "projectivized color set");

  auto decode = [&](std::uint64_t t) {
    std::vector<int> c(static_cast<std::size_t>(units));
    for (int b = 0; b < units; ++b) {
      c[b] = static_cast<int>(t % r);
      t /= r;
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    std::uint64_t t = 0;
    for (int b = units - 1; b >= 0; --b) t = t * r + c[b];
    return static_cast<int>(t);
  };

  std::vector<std::string> labels;
  std::vector<std::vector<int>> action(static_cast<std::size_t>(units), std::vector<int>(count));
  for (std::uint64_t t = 0; t < count; ++t) {
    const auto c = decode(t);
    std::string name = "(";
    for (int b = 0; b < units; ++b) name += (b ? "," : "") + f.colors().label(c[b]);
    labels.push_back(name + ")");
    for (int b2 = 1; b2 < p; ++b2) {
      std::vector<int> moved(static_cast<std::size_t>(units));
      for (int b = 1; b < p; ++b) moved[b - 1] = c[(b2 * b) % p - 1];
      action[b2 - 1][t] = encode(moved);
    }
  }
  const Space& space = cached_space(p, f.dim());
  std::vector<int> values(space.size());
  std::vector<int> c(static_cast<std::size_t>(units));
  for (Point x = 0; x < space.size(); ++x) {
    for (int b = 1; b < p; ++b) c[b - 1] = f[space.scale(b, x)];
    values[x] = encode(c);
  }
  return Coloring(p, f.dim(), ColorSet(p, std::move(labels), std::move(action)), std::move(values));
}

double coloring_distance(const Coloring& f, const Coloring& g) {
  if (f.p() != g.p() || f.dim() != g.dim()) throw ShapeError("colorings live on different spaces");
  std::uint64_t diff = 0;
  for (Point x = 0; x < f.size(); ++x) diff += f[x] != g[x] ? 1 : 0;
  return f.size() == 0 ? 0.0 : static_cast<double>(diff) / static_cast<double>(f.size());
}

}  // namespace hofa
