#include <algorithm>
#include <cmath>
#include <map>

#include "hofa/caps.hpp"
#include "hofa/linalg.hpp"
#include "hofa/patterns.hpp"
#include "instances.hpp"

namespace hofa {

namespace {

/// Smallest c with p^c >= 2 / epsilon.
int default_c0(int p, double epsilon) {
  int c = 1;
  double power = p;
  while (power < 2.0 / epsilon && c < 62) {
    power *= p;
    ++c;
  }
  return c;
}

bool has_generic_instance(const Coloring& g, const ColoredPattern& h) {
  bool found = false;
  detail::enumerate_instances(
      cached_space(g.p(), g.dim()), h.system, true, [&](int i, Point v) { return g[v] == h.psi[i]; },
      [&](const std::vector<Point>&) {
        found = true;
        return false;
      });
  return found;
}

std::vector<std::uint64_t> residuals(const Coloring& g, std::span<const ColoredPattern> family) {
  std::vector<std::uint64_t> out;
  for (const auto& h : family) out.push_back(count_generic_instances(g, h));
  return out;
}

/// A pair (fnz_iota(x), rank of the nonlinear part of B(x)) on the irregular subspace.
struct PatchKey {
  int first = 0;
  std::uint64_t atom = 0;
  friend auto operator<=>(const PatchKey&, const PatchKey&) = default;
};

}  // namespace

RecolorResult removal_recolor(const Coloring& f, std::span<const ColoredPattern> family, const RecolorParams& params) {
  const int p = f.p();
  const int n = f.dim();
  const ColorSet& colors = f.colors();
  const int r = colors.size();
  if (!(params.epsilon > 0.0 && params.epsilon <= 1.0)) throw InvalidParameter("epsilon must lie in (0, 1]");
  for (const auto& h : family) {
    h.validate(colors);
    if (h.system.p != p) throw ShapeError("forbidden pattern over a different prime");
  }

  RecolorResult out{f, {}};
  RecolorReport& report = out.report;
  report.threshold = params.threshold.value_or(params.epsilon / (4.0 * r));
  report.residual_before = residuals(f, family);
  if (std::all_of(report.residual_before.begin(), report.residual_before.end(),
                  [](std::uint64_t c) { return c == 0; })) {
    report.residual_after = report.residual_before;
    report.unchanged = true;
    return out;
  }

  GrowthConfig growth;
  if (params.growth) {
    growth = *params.growth;
  } else {
    const int c0 = default_c0(p, params.epsilon);
    growth = step_schedule(0.1, 0.5, 1, 2, saturating_pow(static_cast<std::uint64_t>(p), static_cast<unsigned>(c0)),
                           0.5, c0);
  }
  growth.seed = params.seed;

  std::vector<ComplexFn> fs;
  for (int c = 0; c < r; ++c) fs.push_back(f.indicator(c));
  report.regularity = strong_regularity(fs, growth);
  const StrongRegularityResult& reg = *report.regularity;
  const PolynomialFactor& factor = reg.factor;
  const PolynomialFactor& refined = reg.refined;
  const ParameterList& params_b = factor.params();
  const int linear = params_b.count({1, 0});
  report.linear_forms = linear;

  const Space& space = cached_space(p, n);
  const auto& ranks_b = factor.atom_ranks();
  const auto& ranks_refined = refined.atom_ranks();

  auto in_irregular = [&](Point x) {
    const Atom a = factor.atom(x);
    for (int s = 0; s < linear; ++s) {
      if (a.residues[s] != 0) return false;
    }
    return true;
  };

  // Color counts on the refined atoms.
  std::map<std::uint64_t, std::vector<std::uint64_t>> refined_counts;
  for (Point x = 0; x < space.size(); ++x) {
    auto& counts = refined_counts[ranks_refined[x]];
    if (counts.empty()) counts.assign(static_cast<std::size_t>(r), 0);
    ++counts[f[x]];
  }
  // High-density colors of each realised regular atom, measured on its selected subatom.
  std::map<std::uint64_t, std::vector<bool>> high;
  for (Point x = 0; x < space.size(); ++x) {
    if (in_irregular(x) || high.count(ranks_b[x])) continue;
    const Atom a = factor.atom(x);
    const auto sub = atom_rank(refined.params(), reg.selector.apply(a));
    std::vector<bool> flags(static_cast<std::size_t>(r), false);
    const auto it = refined_counts.find(sub);
    if (it != refined_counts.end()) {
      std::uint64_t total = 0;
      for (auto c : it->second) total += c;
      for (int c = 0; c < r; ++c) {
        flags[c] = static_cast<double>(it->second[c]) >= report.threshold * static_cast<double>(total);
      }
    }
    high[ranks_b[x]] = std::move(flags);
  }
  // Replacement color per atom, chosen on the smallest atom of each F_p^x-orbit
  // and transported by the action.
  std::map<std::uint64_t, std::optional<int>> replacement;
  for (const auto& [rank, flags] : high) {
    const Atom a = atom_unrank(params_b, rank);
    std::uint64_t rep = rank;
    int to_rep = 1;
    for (int b = 1; b < p; ++b) {
      const auto other = atom_rank(params_b, atom_act(params_b, b, a));
      if (other < rep) {
        rep = other;
        to_rep = b;
      }
    }
    std::optional<int> chosen;
    const auto rep_it = high.find(rep);
    if (rep_it != high.end()) {
      for (int c = 0; c < r; ++c) {
        if (rep_it->second[c]) {
          chosen = c;
          break;
        }
      }
    }
    // a = to_rep^{-1} . rep, so c_a = to_rep^{-1} . c_rep.
    if (chosen) chosen = colors.act(static_cast<int>(inverse_mod(to_rep, p)), *chosen);
    replacement[rank] = chosen;
  }

  Coloring g = f;
  std::uint64_t cleaned = 0;
  std::vector<Point> irregular;
  for (Point x = 0; x < space.size(); ++x) {
    if (in_irregular(x)) {
      irregular.push_back(x);
      continue;
    }
    const auto& flags = high.at(ranks_b[x]);
    const auto& c = replacement.at(ranks_b[x]);
    if (!flags[f[x]] && c) {
      g.set(x, *c);
      ++cleaned;
    }
  }
  report.cleanup_fraction = static_cast<double>(cleaned) / static_cast<double>(space.size());
  report.irregular_fraction = static_cast<double>(irregular.size()) / static_cast<double>(space.size());

  // Coordinates on the irregular subspace: iota sends sum_j y_j w_j to y.
  FpMatrix linear_coeffs;
  for (const auto& t : factor.linear_tables()) {
    std::vector<int> row;
    for (int i = 0; i < n; ++i) row.push_back(static_cast<int>(t.residue(space.unit(i))));
    linear_coeffs.push_back(row);
  }
  const FpMatrix basis = linear_coeffs.empty() ? FpMatrix{} : nullspace_mod_p(linear_coeffs, n, p);
  std::vector<Point> basis_points;
  if (linear_coeffs.empty()) {
    for (int i = 0; i < n; ++i) basis_points.push_back(space.unit(i));
  } else {
    for (const auto& row : basis) basis_points.push_back(space.from_coords(row));
  }
  const int sub_dim = static_cast<int>(basis_points.size());
  const Space& sub_space = cached_space(p, sub_dim);
  std::map<Point, int> first_coord;
  for (Point y = 0; y < sub_space.size(); ++y) {
    first_coord[space.combine(sub_space.coords(y), basis_points)] = sub_space.fnz(y);
  }
  if (first_coord.size() != irregular.size()) throw InternalError("irregular subspace has the wrong size");

  ParameterList params_tilde = params_b;
  params_tilde.set({1, 0}, 0);
  auto key_of = [&](Point x) {
    const Atom a = factor.atom(x);
    Atom rest{std::vector<std::int64_t>(a.residues.begin() + linear, a.residues.end())};
    return PatchKey{first_coord.at(x), atom_rank(params_tilde, rest)};
  };
  auto act_key = [&](int c, const PatchKey& k) {
    const Atom a = atom_unrank(params_tilde, k.atom);
    return PatchKey{(c * k.first) % p, atom_rank(params_tilde, atom_act(params_tilde, c, a))};
  };

  // Orbits of realised keys; each point records its orbit and the scalar
  // carrying the orbit representative to its key.
  std::map<PatchKey, std::pair<std::size_t, int>> orbit_of;
  std::vector<PatchKey> reps;
  std::vector<std::pair<std::size_t, int>> point_orbit(irregular.size());
  for (std::size_t i = 0; i < irregular.size(); ++i) {
    const PatchKey k = key_of(irregular[i]);
    auto it = orbit_of.find(k);
    if (it == orbit_of.end()) {
      PatchKey rep = k;
      for (int c = 1; c < p; ++c) rep = std::min(rep, act_key(c, k));
      const std::size_t id = reps.size();
      reps.push_back(rep);
      for (int c = 1; c < p; ++c) orbit_of.emplace(act_key(c, rep), std::make_pair(id, c));
      it = orbit_of.find(k);
    }
    point_orbit[i] = it->second;
  }
  // Allowed colors per orbit, most frequent on the representative first.
  std::vector<std::vector<int>> choices(reps.size());
  for (std::size_t o = 0; o < reps.size(); ++o) {
    std::vector<std::uint64_t> freq(static_cast<std::size_t>(r), 0);
    for (std::size_t i = 0; i < irregular.size(); ++i) {
      if (point_orbit[i].first == o && point_orbit[i].second == 1) ++freq[f[irregular[i]]];
    }
    for (int c = 0; c < r; ++c) {
      bool fixed = true;
      for (int b = 1; b < p && fixed; ++b) {
        if (act_key(b, reps[o]) == reps[o]) fixed = colors.act(b, c) == c;
      }
      if (fixed) choices[o].push_back(c);
    }
    std::stable_sort(choices[o].begin(), choices[o].end(), [&](int a, int b) { return freq[a] > freq[b]; });
    if (choices[o].empty()) {
      report.residual_after = residuals(g, family);
      throw PatchFailed("no color is fixed by the stabiliser of a patch orbit", report);
    }
  }

  std::vector<std::size_t> pick(reps.size(), 0);
  for (std::uint64_t attempt = 0; attempt < params.xi_budget; ++attempt) {
    ++report.xi_tried;
    for (std::size_t i = 0; i < irregular.size(); ++i) {
      const auto [o, c] = point_orbit[i];
      g.set(irregular[i], colors.act(c, choices[o][pick[o]]));
    }
    const bool clear = std::none_of(family.begin(), family.end(),
                                    [&](const ColoredPattern& h) { return has_generic_instance(g, h); });
    if (clear) {
      report.residual_after = residuals(g, family);
      report.distance = coloring_distance(f, g);
      out.g = std::move(g);
      return out;
    }
    // Odometer over the orbit choices, first orbit fastest.
    std::size_t o = 0;
    for (; o < pick.size(); ++o) {
      if (++pick[o] < choices[o].size()) break;
      pick[o] = 0;
    }
    if (o == pick.size()) break;
  }
  report.residual_after = residuals(g, family);
  report.distance = coloring_distance(f, g);
  throw PatchFailed("no projective patch within " + std::to_string(params.xi_budget) +
                        " candidates removes every forbidden generic instance",
                    report);
}

}  // namespace hofa
