#include "hofa/tester.hpp"

#include <algorithm>
#include <set>

#include "hofa/caps.hpp"
#include "hofa/linalg.hpp"
#include "hofa/stats.hpp"
#include "instances.hpp"

namespace hofa {

namespace {

/// Calls visit on every ordered tuple of ell independent points of F_p^n.
void for_each_ordered_basis(int p, int n, int ell, const std::function<bool(const std::vector<Point>&)>& visit) {
  if (ell == 0) {
    visit({});
    return;
  }
  if (ell > n) return;
  const LinearSystem empty{p, ell, {}};
  detail::enumerate_instances(cached_space(p, n), empty, true, [](int, Point) { return true; }, visit);
}

/// Calls visit on one basis of every ell-dimensional subspace of F_p^n.
void for_each_subspace(int p, int n, int ell, const std::function<bool(const std::vector<Point>&)>& visit) {
  const Space& space = cached_space(p, n);
  for (const auto& rows : enumerate_rref(p, ell, n)) {
    std::vector<Point> basis;
    for (const auto& row : rows) basis.push_back(space.from_coords(row));
    if (!visit(basis)) return;
  }
}

Coloring restrict_basis(const Coloring& f, std::span<const Point> basis, Point base = 0) {
  return restrict_to(f, Subspace{f.p(), f.dim(), std::vector<Point>(basis.begin(), basis.end()), base});
}

/// Whether f has a restriction to an ell-dimensional subspace, in some
/// ordered basis, whose values form one of `tables`.
bool has_restriction_in(const Coloring& f, int ell, const std::set<std::vector<int>>& tables) {
  bool found = false;
  for_each_ordered_basis(f.p(), f.dim(), ell, [&](const std::vector<Point>& basis) {
    found = tables.count(restrict_basis(f, basis).values()) > 0;
    return !found;
  });
  return found;
}

bool values_in_field(const Coloring& f) {
  return std::all_of(f.values().begin(), f.values().end(), [&](int c) { return c < f.p(); });
}

void for_each_function(int p, int n, int r, const CharacterizationOptions& options,
                       bool& exhaustive, const std::function<bool(const Coloring&)>& visit) {
  const Point size = cached_space(p, n).size();
  const std::uint64_t count = saturating_pow(static_cast<std::uint64_t>(r), size);
  const ColorSet colors = ColorSet::numbered(r);
  std::vector<int> values(size, 0);
  if (count <= options.function_cap) {
    for (std::uint64_t t = 0; t < count; ++t) {
      if (!visit(Coloring(p, n, colors, values))) return;
      for (Point x = 0; x < size; ++x) {
        if (++values[x] < r) break;
        values[x] = 0;
      }
    }
    return;
  }
  exhaustive = false;
  Rng rng(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    for (auto& v : values) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(r)));
    if (!visit(Coloring(p, n, colors, values))) return;
  }
}

bool member(const Property& property, const Coloring& f) {
  const auto m = property.contains(f);
  if (!m) throw OracleFailure("property '" + property.name() + "' cannot decide a function on F_" +
                              std::to_string(f.p()) + "^" + std::to_string(f.dim()));
  return *m;
}

}  // namespace

std::string to_string(SubspaceMode mode) { return mode == SubspaceMode::linear ? "linear" : "affine"; }

Subspace sample_subspace(int p, int n, int d, Rng& rng, SubspaceMode mode) {
  require_prime(p);
  if (d < 0 || d > n) throw InvalidParameter("subspace dimension must lie in [0, n]");
  const Space& space = cached_space(p, n);
  Subspace u{p, n, {}, 0};
  for (;;) {
    u.basis.clear();
    for (int j = 0; j < d; ++j) u.basis.push_back(static_cast<Point>(rng.below(space.size())));
    if (is_independent_tuple(space, u.basis)) break;
  }
  if (mode == SubspaceMode::affine) u.base = static_cast<Point>(rng.below(space.size()));
  return u;
}

Subspace sample_subspace(int p, int n, int d, std::uint64_t seed, SubspaceMode mode) {
  Rng rng(seed);
  return sample_subspace(p, n, d, rng, mode);
}

Coloring restrict_to(const Coloring& f, const Subspace& u) {
  if (u.p != f.p() || u.n != f.dim()) throw ShapeError("subspace and coloring live on different spaces");
  const Space& space = cached_space(f.p(), f.dim());
  if (!is_independent_tuple(space, u.basis)) throw InvalidParameter("restriction basis is dependent");
  const int d = static_cast<int>(u.basis.size());
  const Space& sub = cached_space(f.p(), d);
  std::vector<int> values(sub.size());
  for (Point y = 0; y < sub.size(); ++y) {
    values[y] = f[space.add(u.base, space.combine(sub.coords(y), u.basis))];
  }
  return Coloring(f.p(), d, f.colors(), std::move(values));
}

// ---------------------------------------------------------------------------
// Property

Property Property::forbidden_family(int p, ColorSet colors, std::map<int, std::vector<Coloring>> rejected) {
  require_prime(p);
  for (const auto& [ell, tables] : rejected) {
    if (ell < 0) throw InvalidParameter("rejected tables need a nonnegative dimension");
    for (const auto& t : tables) {
      if (t.p() != p || t.dim() != ell) throw ShapeError("rejected table lives on the wrong space");
      if (t.colors().size() > colors.size()) throw ShapeError("rejected table uses colors outside S");
    }
  }
  Property prop;
  prop.kind_ = Kind::forbidden_family;
  prop.name_ = "forbidden-family";
  prop.p_ = p;
  prop.colors_ = std::move(colors);
  prop.tables_ = std::move(rejected);
  return prop;
}

Property Property::predicate(std::string name, int p, ColorSet colors,
                             std::function<std::optional<bool>(const Coloring&)> member_fn) {
  require_prime(p);
  if (!member_fn) throw InvalidParameter("predicate property needs a membership function");
  Property prop;
  prop.kind_ = Kind::predicate;
  prop.name_ = std::move(name);
  prop.p_ = p;
  prop.colors_ = std::move(colors);
  prop.member_ = std::move(member_fn);
  return prop;
}

Property Property::linearity(int p) {
  require_prime(p);
  Property prop;
  prop.kind_ = Kind::linearity;
  prop.name_ = "linearity";
  prop.p_ = p;
  prop.colors_ = ColorSet::numbered(p);
  return prop;
}

Property Property::classical_degree(int p, int t) {
  require_prime(p);
  if (t < 0) throw InvalidParameter("degree bound must be nonnegative");
  Property prop;
  prop.kind_ = Kind::classical_degree;
  prop.name_ = "classical-degree<=" + std::to_string(t);
  prop.p_ = p;
  prop.degree_ = t;
  prop.colors_ = ColorSet::numbered(p);
  return prop;
}

Property Property::allowable_2dim(int p, ColorSet colors, const std::vector<Coloring>& allowed) {
  require_prime(p);
  std::set<std::vector<int>> closed;
  for (const auto& t : allowed) {
    if (t.p() != p || t.dim() != 2) throw ShapeError("allowed maps must be tables on F_p^2");
    if (t.colors().size() > colors.size()) throw ShapeError("allowed map uses colors outside S");
    for_each_ordered_basis(p, 2, 2, [&](const std::vector<Point>& basis) {
      closed.insert(restrict_basis(t, basis).values());
      return true;
    });
  }
  Property prop;
  prop.kind_ = Kind::allowable_2dim;
  prop.name_ = "allowable-2-dim-maps";
  prop.p_ = p;
  prop.colors_ = colors;
  for (const auto& v : closed) prop.tables_[2].emplace_back(p, 2, colors, v);
  return prop;
}

std::optional<bool> Property::contains(const Coloring& f) const {
  if (f.p() != p_) throw ShapeError("property and function over different primes");
  switch (kind_) {
    case Kind::predicate:
      return member_(f);
    case Kind::linearity: {
      if (!values_in_field(f)) return false;
      const Space& space = cached_space(f.p(), f.dim());
      for (Point x = 0; x < space.size(); ++x) {
        int expected = 0;
        for (int i = 0; i < f.dim(); ++i) expected += space.coord(x, i) * f[space.unit(i)];
        if (f[x] != expected % p_) return false;
      }
      return true;
    }
    case Kind::classical_degree: {
      if (!values_in_field(f)) return false;
      const std::vector<std::int64_t> residues(f.values().begin(), f.values().end());
      return interpolate(ValueTable(p_, f.dim(), 0, residues)).degree_depth().degree <= degree_;
    }
    case Kind::forbidden_family: {
      for (const auto& [ell, tables] : tables_) {
        if (ell > f.dim() || tables.empty()) continue;
        std::set<std::vector<int>> rejected;
        for (const auto& t : tables) rejected.insert(t.values());
        if (has_restriction_in(f, ell, rejected)) return false;
      }
      return true;
    }
    case Kind::allowable_2dim: {
      const auto it = tables_.find(2);
      if (it == tables_.end()) return false;
      if (f.dim() >= 2) {
        bool ok = true;
        for_each_ordered_basis(p_, f.dim(), 2, [&](const std::vector<Point>& basis) {
          ok = std::any_of(it->second.begin(), it->second.end(), [&](const Coloring& t) {
            return t.values() == restrict_basis(f, basis).values();
          });
          return ok;
        });
        return ok;
      }
      // Low dimensions: f must be the restriction of an allowed table.
      for (const auto& t : it->second) {
        bool hit = false;
        for_each_ordered_basis(p_, 2, f.dim(), [&](const std::vector<Point>& basis) {
          hit = restrict_basis(t, basis).values() == f.values();
          return !hit;
        });
        if (hit) return true;
      }
      return false;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Testers

TestReport run_tester(const Coloring& f, const Property& property, const TesterConfig& config) {
  int d = config.d;
  if (!config.po_mode) {
    if (!config.epsilon || !config.d_of_epsilon) {
      throw InvalidParameter("a tester without po_mode needs epsilon and d(epsilon)");
    }
    d = config.d_of_epsilon(*config.epsilon);
  }
  if (d < 0) throw InvalidParameter("tester dimension must be nonnegative");
  if (config.trials == 0) throw InvalidParameter("tester needs at least one trial");
  TestReport r;
  r.trials = config.trials;
  r.seed = config.seed;
  r.mode = config.mode;
  r.d = d;
  if (f.dim() <= d) {
    const bool in = member(property, f);
    r.rejects = in ? 0 : r.trials;
    if (!in && config.max_witnesses > 0) {
      Subspace whole{f.p(), f.dim(), {}, 0};
      const Space& space = cached_space(f.p(), f.dim());
      for (int i = 0; i < f.dim(); ++i) whole.basis.push_back(space.unit(i));
      r.witnesses.push_back(std::move(whole));
    }
  } else {
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      Rng rng = Rng::stream(config.seed, t);
      Subspace u = sample_subspace(f.p(), f.dim(), d, rng, config.mode);
      if (!member(property, restrict_to(f, u))) {
        ++r.rejects;
        if (r.witnesses.size() < config.max_witnesses) r.witnesses.push_back(std::move(u));
      }
    }
  }
  r.accepts = r.trials - r.rejects;
  r.rate = static_cast<double>(r.rejects) / static_cast<double>(r.trials);
  std::tie(r.ci_low, r.ci_high) = wilson_interval(r.rejects, r.trials);
  return r;
}

double exact_rejection_probability(const Coloring& f, const Property& property, int d, SubspaceMode mode) {
  if (d < 0) throw InvalidParameter("tester dimension must be nonnegative");
  if (f.dim() <= d) return member(property, f) ? 0.0 : 1.0;
  const auto subspaces = gaussian_binomial(f.p(), f.dim(), d);
  const Point bases = mode == SubspaceMode::affine ? f.size() : 1;
  require_within_cap(saturating_mul(static_cast<std::uint64_t>(subspaces), bases), "exhaustive subspace enumeration");
  std::uint64_t rejected = 0;
  std::uint64_t total = 0;
  for_each_subspace(f.p(), f.dim(), d, [&](const std::vector<Point>& basis) {
    for (Point b = 0; b < bases; ++b) {
      ++total;
      if (!member(property, restrict_basis(f, basis, b))) ++rejected;
    }
    return true;
  });
  return static_cast<double>(rejected) / static_cast<double>(total);
}

double blr_rejection_probability(const Coloring& f) {
  if (!values_in_field(f)) throw InvalidParameter("BLR reads colors as elements of F_p");
  const Space& space = cached_space(f.p(), f.dim());
  require_within_cap(saturating_mul(space.size(), space.size()), "exhaustive BLR enumeration");
  std::uint64_t bad = 0;
  for (Point x = 0; x < space.size(); ++x) {
    for (Point y = 0; y < space.size(); ++y) {
      if ((f[x] + f[y]) % f.p() != f[space.add(x, y)]) ++bad;
    }
  }
  return static_cast<double>(bad) / (static_cast<double>(space.size()) * static_cast<double>(space.size()));
}

TestReport blr_test(const Coloring& f, std::uint64_t trials, std::uint64_t seed) {
  if (!values_in_field(f)) throw InvalidParameter("BLR reads colors as elements of F_p");
  if (trials == 0) throw InvalidParameter("BLR needs at least one trial");
  const Space& space = cached_space(f.p(), f.dim());
  TestReport r;
  r.trials = trials;
  r.seed = seed;
  r.d = 2;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t);
    const auto x = static_cast<Point>(rng.below(space.size()));
    const auto y = static_cast<Point>(rng.below(space.size()));
    if ((f[x] + f[y]) % f.p() != f[space.add(x, y)]) ++r.rejects;
  }
  r.accepts = trials - r.rejects;
  r.rate = static_cast<double>(r.rejects) / static_cast<double>(trials);
  std::tie(r.ci_low, r.ci_high) = wilson_interval(r.rejects, trials);
  return r;
}

std::vector<ColoredPattern> property_to_patterns(const Property& property, int ell) {
  if (property.kind() != Property::Kind::forbidden_family) {
    throw InvalidParameter("only forbidden-restriction families translate to patterns");
  }
  if (ell < 1) throw InvalidParameter("patterns need at least one variable");
  std::vector<ColoredPattern> out;
  const auto it = property.tables().find(ell);
  if (it == property.tables().end()) return out;
  const LinearSystem system = canonical_system(property.p(), ell, SystemKind::full);
  for (const auto& t : it->second) out.push_back(ColoredPattern{system, t.values()});
  return out;
}

CharacterizationReport check_locally_characterized(const Property& property, int d, int n_max,
                                                   const CharacterizationOptions& options) {
  if (d < 0) throw InvalidParameter("restriction dimension must be nonnegative");
  CharacterizationReport report;
  const int p = property.p();
  const int r = property.colors().size();
  for (int n = d + 1; n <= n_max && report.holds; ++n) {
    for_each_function(p, n, r, options, report.exhaustive, [&](const Coloring& f) {
      ++report.functions_checked;
      const bool global = member(property, f);
      bool local = true;
      std::vector<Point> bad;
      for_each_subspace(p, n, d, [&](const std::vector<Point>& basis) {
        local = member(property, restrict_basis(f, basis));
        if (!local) bad = basis;
        return local;
      });
      if (global != local) {
        report.holds = false;
        report.counterexample = f;
        if (!local) report.subspace = Subspace{p, n, bad, 0};
        return false;
      }
      return true;
    });
  }
  return report;
}

CharacterizationReport check_subspace_hereditary(const Property& property, int n_max,
                                                 const CharacterizationOptions& options) {
  CharacterizationReport report;
  const int p = property.p();
  const int r = property.colors().size();
  for (int n = 1; n <= n_max && report.holds; ++n) {
    for_each_function(p, n, r, options, report.exhaustive, [&](const Coloring& f) {
      ++report.functions_checked;
      if (!member(property, f)) return true;
      std::vector<int> dims;
      for (int k = 1; k < n; ++k) dims.push_back(k);
      dims.push_back(0);
      for (int k : dims) {
        bool ok = true;
        for_each_subspace(p, n, k, [&](const std::vector<Point>& basis) {
          ok = member(property, restrict_basis(f, basis));
          if (!ok) {
            report.holds = false;
            report.counterexample = f;
            report.subspace = Subspace{p, n, basis, 0};
          }
          return ok;
        });
        if (!ok) return false;
      }
      return true;
    });
  }
  return report;
}

bool spot_check_invariance(const Property& property, const Coloring& f, int trials, std::uint64_t seed) {
  const bool base = member(property, f);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    const Subspace automorphism = sample_subspace(f.p(), f.dim(), f.dim(), rng);
    if (member(property, restrict_to(f, automorphism)) != base) return false;
  }
  return true;
}

}  // namespace hofa
