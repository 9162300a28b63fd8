#include "hofa/suite/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hofa::oracle {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Calls fn on every tuple in {0..base-1}^len.
void for_each_tuple(int base, int len, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> t(static_cast<std::size_t>(len), 0);
  for (;;) {
    fn(t);
    int i = 0;
    for (; i < len; ++i) {
      if (++t[i] < base) break;
      t[i] = 0;
    }
    if (i == len) return;
  }
}

}  // namespace

std::vector<std::int64_t> sigma_solutions(int p, int b, int d, int k) {
  const std::int64_t mod = ipow(p, k + 1);
  const std::int64_t bd = ipow(b, d) % p;
  std::vector<std::int64_t> out;
  for (std::int64_t s = 0; s < mod; ++s) {
    if (s % p != bd) continue;
    std::int64_t power = 1;
    for (int i = 0; i < p - 1; ++i) power = (power * s) % mod;
    if (power == 1 % mod) out.push_back(s);
  }
  return out;
}

std::complex<double> gowers_power(const std::vector<std::complex<double>>& f, int p, int n, int d) {
  const Space& space = cached_space(p, n);
  const std::uint64_t size = space.size();
  std::complex<double> sum = 0.0;
  std::vector<Point> h(static_cast<std::size_t>(d), 0);
  std::uint64_t count = 0;
  for (Point x = 0; x < size; ++x) {
    for_each_tuple(static_cast<int>(size), d, [&](const std::vector<int>& hs) {
      std::complex<double> prod = 1.0;
      for (std::uint32_t w = 0; w < (1u << d); ++w) {
        Point y = x;
        int weight = 0;
        for (int j = 0; j < d; ++j) {
          if (w >> j & 1u) {
            y = space.add(y, static_cast<Point>(hs[j]));
            ++weight;
          }
        }
        prod *= (weight % 2 == 1) ? std::conj(f[y]) : f[y];
      }
      sum += prod;
      ++count;
    });
  }
  return sum / static_cast<double>(count);
}

double gowers_norm(const std::vector<std::complex<double>>& f, int p, int n, int d) {
  const double v = std::abs(gowers_power(f, p, n, d));
  return std::pow(v, 1.0 / static_cast<double>(1u << d));
}

std::pair<std::uint64_t, std::uint64_t> blr_count(const std::vector<int>& f, int p, int n) {
  const Space& space = cached_space(p, n);
  std::uint64_t bad = 0;
  for (Point x = 0; x < space.size(); ++x) {
    for (Point y = 0; y < space.size(); ++y) {
      if ((f[x] + f[y]) % p != f[space.add(x, y)]) ++bad;
    }
  }
  return {bad, static_cast<std::uint64_t>(space.size()) * space.size()};
}

bool independent(const Space& space, const std::vector<Point>& x) {
  std::set<Point> span;
  for_each_tuple(space.p(), static_cast<int>(x.size()), [&](const std::vector<int>& c) {
    Point v = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (int t = 0; t < c[j]; ++t) v = space.add(v, x[j]);
    }
    span.insert(v);
  });
  return span.size() == static_cast<std::size_t>(ipow(space.p(), static_cast<int>(x.size())));
}

std::vector<std::pair<std::vector<Point>, std::vector<Point>>> subspaces(int p, int n, int d) {
  const Space& space = cached_space(p, n);
  std::map<std::vector<Point>, std::vector<Point>> found;
  for_each_tuple(static_cast<int>(space.size()), d, [&](const std::vector<int>& t) {
    std::vector<Point> basis(t.begin(), t.end());
    if (!independent(space, basis)) return;
    std::set<Point> span;
    for_each_tuple(p, d, [&](const std::vector<int>& c) {
      Point v = 0;
      for (int j = 0; j < d; ++j) {
        for (int s = 0; s < c[j]; ++s) v = space.add(v, basis[j]);
      }
      span.insert(v);
    });
    found.emplace(std::vector<Point>(span.begin(), span.end()), basis);
  });
  return {found.begin(), found.end()};
}

std::uint64_t instance_count(const std::vector<int>& f, int p, int n, const LinearSystem& system,
                             const std::vector<int>& psi, bool generic) {
  const Space& space = cached_space(p, n);
  std::uint64_t count = 0;
  for_each_tuple(static_cast<int>(space.size()), system.vars, [&](const std::vector<int>& t) {
    std::vector<Point> x(t.begin(), t.end());
    for (int i = 0; i < system.size(); ++i) {
      Point v = 0;
      for (int j = 0; j < system.vars; ++j) {
        for (int s = 0; s < mod_floor(system.rows[i][j], p); ++s) v = space.add(v, x[j]);
      }
      if (f[v] != psi[i]) return;
    }
    if (generic && !independent(space, x)) return;
    ++count;
  });
  return count;
}

std::vector<std::int64_t> poly_residues(const MonomialRep& poly, int depth) {
  const int p = poly.p();
  const Space& space = cached_space(p, poly.dim());
  const std::int64_t mod = ipow(p, depth + 1);
  std::vector<std::int64_t> out(space.size());
  const auto& alpha = poly.alpha();
  const std::int64_t alpha_res = alpha.residue() * ipow(p, depth - alpha.depth());
  for (Point x = 0; x < space.size(); ++x) {
    std::int64_t acc = alpha_res;
    for (const auto& [mono, c] : poly.terms()) {
      std::int64_t v = c;
      for (int j = 0; j < poly.dim(); ++j) v *= ipow(space.coord(x, j), mono.exps[j]);
      acc += v * ipow(p, depth - mono.depth);
    }
    out[x] = mod_floor(acc, mod);
  }
  return out;
}

DegreeDepth symbolic_type(const MonomialRep& poly) {
  DegreeDepth t{0, 0};
  for (const auto& [mono, c] : poly.terms()) {
    int sum = 0;
    for (int e : mono.exps) sum += e;
    t.degree = std::max(t.degree, sum + mono.depth * (poly.p() - 1));
    t.depth = std::max(t.depth, mono.depth);
  }
  return t;
}

bool homogeneous_of_type(const MonomialRep& poly, DegreeDepth type) {
  const int p = poly.p();
  int depth = type.depth;
  for (const auto& [mono, c] : poly.terms()) depth = std::max(depth, mono.depth);
  depth = std::max(depth, poly.alpha().depth());
  // sigma is only defined modulo p^{k+1}, so deeper values cannot have this type.
  if (type.degree > 0 && depth > type.depth) return false;
  const auto values = poly_residues(poly, depth);
  const std::int64_t mod = ipow(p, depth + 1);
  const Space& space = cached_space(p, poly.dim());
  for (int b = 1; b < p; ++b) {
    std::int64_t s = 1;
    if (type.degree > 0) {
      const auto sols = sigma_solutions(p, b, type.degree, type.depth);
      if (sols.size() != 1) return false;
      s = sols[0];
    }
    for (Point x = 0; x < space.size(); ++x) {
      if (mod_floor(values[space.scale(b, x)] - s * values[x], mod) != 0) return false;
    }
  }
  return true;
}

std::set<std::vector<std::int64_t>> consistency_set(DegreeDepth type, const LinearSystem& system, int n) {
  const int p = system.p;
  const int k = type.depth;
  const std::int64_t mod = ipow(p, k + 1);
  std::vector<Monomial> monos;
  for (int kk = 0; kk <= k; ++kk) {
    for_each_tuple(p, n, [&](const std::vector<int>& e) {
      int sum = 0;
      for (int v : e) sum += v;
      if (sum > 0 && sum + kk * (p - 1) <= type.degree) monos.push_back(Monomial{e, kk});
    });
  }
  const Space& space = cached_space(p, n);
  std::set<std::vector<std::int64_t>> tuples;
  tuples.insert(std::vector<std::int64_t>(system.rows.size(), 0));
  for_each_tuple(p, static_cast<int>(monos.size()), [&](const std::vector<int>& coeffs) {
    MonomialRep poly(p, n);
    for (std::size_t i = 0; i < monos.size(); ++i) {
      if (coeffs[i] != 0) poly.set_term(monos[i], coeffs[i]);
    }
    const DegreeDepth t = symbolic_type(poly);
    if (!(t == type) || !homogeneous_of_type(poly, type)) return;
    const auto values = poly_residues(poly, k);
    for_each_tuple(static_cast<int>(space.size()), system.vars, [&](const std::vector<int>& x) {
      std::vector<std::int64_t> tuple;
      for (const auto& row : system.rows) {
        Point v = 0;
        for (int j = 0; j < system.vars; ++j) {
          for (int s = 0; s < mod_floor(row[j], p); ++s) v = space.add(v, static_cast<Point>(x[j]));
        }
        tuple.push_back(values[v]);
      }
      tuples.insert(tuple);
    });
  });
  // Close under addition.
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::vector<std::int64_t>> current(tuples.begin(), tuples.end());
    for (const auto& a : current) {
      for (const auto& b : current) {
        std::vector<std::int64_t> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % mod;
        if (tuples.insert(c).second) grew = true;
      }
    }
  }
  return tuples;
}

std::vector<std::complex<double>> cell_average(const std::vector<std::complex<double>>& f,
                                               const std::vector<std::uint64_t>& atoms) {
  std::map<std::uint64_t, std::pair<std::complex<double>, double>> sums;
  for (std::size_t x = 0; x < f.size(); ++x) {
    auto& s = sums[atoms[x]];
    s.first += f[x];
    s.second += 1.0;
  }
  std::vector<std::complex<double>> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const auto& s = sums[atoms[x]];
    out[x] = s.first / s.second;
  }
  return out;
}

double l2(const std::vector<std::complex<double>>& f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(f.size()));
}

}  // namespace hofa::oracle
