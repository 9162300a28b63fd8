#include "hofa/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "hofa/caps.hpp"
#include "hofa/errors.hpp"
#include "hofa/linalg.hpp"

namespace hofa {

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : t) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

TupleGroup::TupleGroup(int m, std::int64_t modulus) : m_(m), mod_(modulus) {
  Tuple zero(static_cast<std::size_t>(m), 0);
  set_.insert(zero);
  elements_.push_back(std::move(zero));
}

Tuple TupleGroup::add(const Tuple& a, const Tuple& b) const {
  Tuple r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod_floor(a[i] + b[i], mod_);
  return r;
}

void TupleGroup::add_generator(const Tuple& g) {
  if (static_cast<int>(g.size()) != m_) throw ShapeError("tuple length does not match the group");
  if (contains(g)) return;
  // Coset representatives i*g for 0 <= i < order of g modulo the group.
  std::vector<Tuple> reps;
  Tuple t(g.size(), 0);
  do {
    reps.push_back(t);
    t = add(t, g);
  } while (!contains(t));
  const std::vector<Tuple> base = elements_;
  require_within_cap(saturating_mul(base.size(), reps.size()), "consistency subgroup closure");
  for (std::size_t r = 1; r < reps.size(); ++r) {
    for (const auto& s : base) {
      Tuple e = add(s, reps[r]);
      if (set_.insert(e).second) elements_.push_back(std::move(e));
    }
  }
}

bool ConsistencySet::contains(const Tuple& t) const {
  return std::binary_search(elements.begin(), elements.end(), t);
}

namespace {

void for_each_exponent(int p, int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(e);
    int pos = 0;
    while (pos < n && ++e[static_cast<std::size_t>(pos)] == p) e[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) return;
  }
}

}  // namespace

std::vector<ValueTable> witness_generators(int p, int n, DegreeDepth type, WitnessMode mode) {
  require_prime(p);
  if (!in_domain(p, type)) throw InvalidParameter("(d,k) = " + to_string(type) + " is not in D_p");
  if (n < 1) throw InvalidParameter("witness dimension must be positive");
  const int k = type.depth;
  const int j = type.degree % (p - 1);
  std::unordered_set<ValueTable, ValueTableHash> seen;
  std::vector<ValueTable> out;
  auto keep = [&](ValueTable t) {
    if (t.is_zero()) return;
    if (seen.insert(t).second) out.push_back(std::move(t));
  };
  for (int kk = 0; kk <= k; ++kk) {
    for_each_exponent(p, n, [&](const std::vector<int>& e) {
      int sum = 0;
      for (int v : e) sum += v;
      if (sum == 0 || sum + kk * (p - 1) > type.degree) return;
      MonomialRep mono(p, n);
      mono.set_term(Monomial{e, kk}, 1);
      keep(character_projection(mono.table().embed(k), j).embed(k));
    });
  }
  if (mode == WitnessMode::slack) keep(ValueTable::constant(p, n, TorusValue(p, k, 1)));
  return out;
}

ConsistencySet consistency_set(DegreeDepth type, const LinearSystem& system,
                               const ConsistencyOptions& options) {
  system.validate();
  const int p = system.p;
  if (!in_domain(p, type)) throw InvalidParameter("(d,k) = " + to_string(type) + " is not in D_p");
  const int ell = system.vars;
  const int m = system.size();
  const int n_cap = options.n_cap > 0 ? options.n_cap : ell + 1;
  const std::int64_t mod = checked_pow(p, type.depth + 1);

  ConsistencySet out;
  out.p = p;
  out.m = m;
  out.type = type;

  std::vector<Tuple> previous;
  bool have_previous = false;
  for (int n = 1; n <= n_cap; ++n) {
    const auto gens = witness_generators(p, n, type, options.mode);
    const Space& space = cached_space(p, n);
    const int max_rank = std::min(n, ell);

    // Up to a change of basis of F_p^n, x in (F_p^n)^ell is a reduced row
    // echelon matrix of rank r <= min(n, ell) padded with zero rows.
    std::unordered_set<Tuple, TupleHash> raw;
    raw.insert(Tuple(static_cast<std::size_t>(m), 0));
    for (int r = 1; r <= max_rank; ++r) {
      const auto reps = enumerate_rref(p, r, ell);
      require_within_cap(saturating_mul(saturating_mul(reps.size(), gens.size()), static_cast<std::uint64_t>(m)),
                         "consistency enumeration");
      for (const auto& x : reps) {
        std::vector<Point> points(static_cast<std::size_t>(m));
        std::vector<int> coords(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < m; ++i) {
          std::fill(coords.begin(), coords.end(), 0);
          for (int t = 0; t < r; ++t) {
            int acc = 0;
            for (int v = 0; v < ell; ++v) acc += x[t][v] * system.rows[i][v];
            coords[t] = acc % p;
          }
          points[i] = space.from_coords(coords);
        }
        TupleGroup local(m, mod);
        Tuple tuple(static_cast<std::size_t>(m));
        for (const auto& g : gens) {
          for (int i = 0; i < m; ++i) tuple[i] = g.residue(points[i]);
          local.add_generator(tuple);
        }
        raw.insert(local.elements().begin(), local.elements().end());
      }
    }

    TupleGroup closed(m, mod);
    for (const auto& t : raw) closed.add_generator(t);
    std::vector<Tuple> elems = closed.elements();
    std::sort(elems.begin(), elems.end());
    out.per_n_raw_sizes.push_back(raw.size());
    out.per_n_sizes.push_back(elems.size());
    out.raw_elements.assign(raw.begin(), raw.end());
    std::sort(out.raw_elements.begin(), out.raw_elements.end());
    out.stabilized = have_previous && elems == previous;
    previous = std::move(elems);
    have_previous = true;
  }
  out.elements = std::move(previous);
  return out;
}

const ConsistencySet& ConsistencyOracle::get(DegreeDepth type, const LinearSystem& system) {
  auto key = std::make_tuple(system.p, system.vars, type, system.rows);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    auto set = std::make_unique<ConsistencySet>(consistency_set(type, system, options_));
    it = cache_.emplace(std::move(key), std::move(set)).first;
  }
  return *it->second;
}

std::uint64_t ConsistencyProduct::size() const {
  std::uint64_t s = 1;
  for (const auto& [dk, count] : params.counts()) {
    s = saturating_mul(s, saturating_pow(components.at(dk)->size(), static_cast<unsigned>(count)));
  }
  return s;
}

double ConsistencyProduct::log_size() const {
  double s = 0.0;
  for (const auto& [dk, count] : params.counts()) {
    s += count * std::log(static_cast<double>(components.at(dk)->size()));
  }
  return s;
}

bool ConsistencyProduct::column_consistent(std::span<const Atom> tuple, int slot) const {
  const auto types = params.slot_types();
  Tuple column(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) column[i] = tuple[i].residues[static_cast<std::size_t>(slot)];
  return components.at(types[static_cast<std::size_t>(slot)])->contains(column);
}

bool ConsistencyProduct::contains(std::span<const Atom> tuple) const {
  if (static_cast<int>(tuple.size()) != m) throw ShapeError("atom tuple length does not match the system");
  const int slots = params.total_slots();
  for (int s = 0; s < slots; ++s) {
    if (!column_consistent(tuple, s)) return false;
  }
  return true;
}

ConsistencyProduct consistency_set_product(const ParameterList& params, const LinearSystem& system,
                                           ConsistencyOracle& oracle) {
  if (params.p() != system.p) throw ShapeError("parameter list and system use different primes");
  ConsistencyProduct out;
  out.params = params;
  out.m = system.size();
  for (const auto& [dk, count] : params.counts()) {
    const ConsistencySet& set = oracle.get(dk, system);
    out.components[dk] = &set;
    out.stabilized = out.stabilized && set.stabilized;
  }
  return out;
}

FullDimensionalReport is_full_dimensional(const LinearSystem& system, std::span<const DegreeDepth> types,
                                          const ConsistencyOptions& options) {
  system.validate();
  const LinearSystem full = canonical_system(system.p, system.vars, SystemKind::full);
  FullDimensionalReport report;
  for (const auto& dk : types) {
    const ConsistencySet a = consistency_set(dk, system, options);
    const ConsistencySet b = consistency_set(dk, full, options);
    report.types.push_back(dk);
    report.system_sizes.push_back(a.size());
    report.full_sizes.push_back(b.size());
    report.conclusive = report.conclusive && a.stabilized && b.stabilized;
    if (a.size() != b.size()) report.full_dimensional = false;
  }
  return report;
}

namespace {

void check_cs_shapes(const LinearSystem& m, const LinearSystem& n, std::span<const int> c) {
  m.validate();
  n.validate();
  if (m.p != n.p) throw ShapeError("block matrices use different primes");
  if (c.empty()) throw InvalidParameter("at least one scalar c_i is required");
  if (n.size() != m.size() * static_cast<int>(c.size())) {
    throw ShapeError("N must have m * n rows for n scalars");
  }
}

std::vector<int> scaled_row(const std::vector<int>& row, int c, int p) {
  std::vector<int> r(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) r[i] = static_cast<int>(mod_floor(std::int64_t{c} * row[i], p));
  return r;
}

}  // namespace

LinearSystem cs_system_prime(const LinearSystem& m, const LinearSystem& n, std::span<const int> c) {
  check_cs_shapes(m, n, c);
  const int p = m.p;
  const int ell = m.vars;
  const int ellp = n.vars;
  LinearSystem out{p, ell + ellp, {}};
  for (const auto& row : m.rows) {
    std::vector<int> r(row);
    r.resize(static_cast<std::size_t>(ell + ellp), 0);
    out.rows.push_back(std::move(r));
  }
  for (std::size_t t = 0; t < c.size(); ++t) {
    for (int i = 0; i < m.size(); ++i) {
      std::vector<int> r = scaled_row(m.rows[i], c[t], p);
      const auto& nrow = n.rows[t * static_cast<std::size_t>(m.size()) + static_cast<std::size_t>(i)];
      r.insert(r.end(), nrow.begin(), nrow.end());
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

LinearSystem cs_system_double_prime(const LinearSystem& m, const LinearSystem& n, std::span<const int> c) {
  check_cs_shapes(m, n, c);
  const int p = m.p;
  const int ell = m.vars;
  const int ellp = n.vars;
  const int vars = ell + 2 * ellp;
  LinearSystem out{p, vars, {}};
  for (const auto& row : m.rows) {
    std::vector<int> r(row);
    r.resize(static_cast<std::size_t>(vars), 0);
    out.rows.push_back(std::move(r));
  }
  for (int copy = 0; copy < 2; ++copy) {
    for (std::size_t t = 0; t < c.size(); ++t) {
      for (int i = 0; i < m.size(); ++i) {
        std::vector<int> r = scaled_row(m.rows[i], c[t], p);
        r.resize(static_cast<std::size_t>(vars), 0);
        const auto& nrow = n.rows[t * static_cast<std::size_t>(m.size()) + static_cast<std::size_t>(i)];
        std::copy(nrow.begin(), nrow.end(), r.begin() + ell + copy * ellp);
        out.rows.push_back(std::move(r));
      }
    }
  }
  return out;
}

EquidistributionReport equidistribution_report(const PolynomialFactor& factor, const LinearSystem& system,
                                               ConsistencyOracle& oracle) {
  system.validate();
  if (factor.p() != system.p) throw ShapeError("factor and system use different primes");
  const int p = factor.p();
  const int n = factor.dim();
  const int ell = system.vars;
  const int m = system.size();
  const ParameterList& params = factor.params();
  const std::uint64_t atoms = params.norm();
  const std::uint64_t keys = saturating_pow(atoms, static_cast<unsigned>(m));
  if (keys == std::numeric_limits<std::uint64_t>::max()) {
    throw CapExceeded("atom tuples do not fit a 64-bit key");
  }
  const Space& space = cached_space(p, n);
  const std::uint64_t total = saturating_pow(space.size(), static_cast<unsigned>(ell));
  require_within_cap(saturating_mul(total, static_cast<std::uint64_t>(m)), "equidistribution enumeration");

  const auto& ranks = factor.atom_ranks();
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::vector<Point> x(static_cast<std::size_t>(ell), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (int j = 0; j < ell; ++j) {
      x[j] = static_cast<Point>(rest % space.size());
      rest /= space.size();
    }
    const auto values = evaluate(system, space, x);
    std::uint64_t key = 0;
    for (int i = m - 1; i >= 0; --i) key = key * atoms + ranks[values[i]];
    ++counts[key];
  }

  const ConsistencyProduct phi = consistency_set_product(params, system, oracle);
  const double expected = 1.0 / static_cast<double>(phi.size());
  EquidistributionReport report;
  report.total = total;
  report.consistent_count = static_cast<double>(phi.size());
  std::uint64_t consistent_observed = 0;
  std::vector<Atom> tuple(static_cast<std::size_t>(m));
  for (const auto& [key, count] : counts) {
    std::uint64_t rest = key;
    for (int i = 0; i < m; ++i) {
      tuple[i] = atom_unrank(params, rest % atoms);
      rest /= atoms;
    }
    const double prob = static_cast<double>(count) / static_cast<double>(total);
    if (phi.contains(tuple)) {
      ++consistent_observed;
      report.max_deviation = std::max(report.max_deviation, std::abs(prob - expected));
    } else {
      report.inconsistent_mass += prob;
    }
  }
  report.observed_tuples = counts.size();
  if (consistent_observed < phi.size()) report.max_deviation = std::max(report.max_deviation, expected);
  return report;
}

SelectorReport verify_selector(const SubatomSelector& selector, std::span<const LinearSystem> systems,
                               ConsistencyOracle& oracle) {
  const ParameterList& source = selector.source();
  const ParameterList& target = selector.target();
  const int p = source.p();
  SelectorReport report;

  const auto atoms = enumerate_atoms(source);
  for (const auto& a : atoms) {
    const Atom s = selector.apply(a);
    if (atom_project(target, s, source) != a) report.projection_ok = false;
    for (int b = 1; b < p; ++b) {
      if (atom_act(target, b, s) != selector.apply(atom_act(source, b, a))) report.equivariance_ok = false;
    }
    ++report.atoms_checked;
  }

  const auto source_types = source.slot_types();
  const int source_slots = source.total_slots();
  const int target_slots = target.total_slots();
  for (const auto& system : systems) {
    const ConsistencyProduct phi = consistency_set_product(source, system, oracle);
    const ConsistencyProduct phi_target = consistency_set_product(target, system, oracle);
    const int m = system.size();
    require_within_cap(phi.size(), "selector consistency enumeration");
    // Odometer over one element of Phi_{d,k}(L) per source slot.
    std::vector<const std::vector<Tuple>*> choices;
    for (const auto& dk : source_types) choices.push_back(&phi.components.at(dk)->elements);
    std::vector<std::size_t> pos(choices.size(), 0);
    std::vector<Atom> tuple(static_cast<std::size_t>(m));
    std::vector<Atom> image(static_cast<std::size_t>(m));
    while (true) {
      for (int i = 0; i < m; ++i) {
        tuple[i].residues.resize(static_cast<std::size_t>(source_slots));
        for (int s = 0; s < source_slots; ++s) tuple[i].residues[s] = (*choices[s])[pos[s]][i];
        image[i] = selector.apply(tuple[i]);
      }
      for (int s = 0; s < target_slots; ++s) {
        if (!phi_target.column_consistent(image, s)) report.consistency_ok = false;
      }
      ++report.tuples_checked;
      std::size_t c = 0;
      while (c < pos.size() && ++pos[c] == choices[c]->size()) pos[c++] = 0;
      if (c == pos.size()) break;
    }
  }
  return report;
}

}  // namespace hofa
