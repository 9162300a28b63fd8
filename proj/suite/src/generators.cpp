#include "hofa/suite/generators.hpp"

#include <cmath>
#include <numbers>

namespace hofa::gen {

MonomialRep random_poly(int p, int n, int max_degree, int max_depth, Rng& rng, int max_terms, bool with_alpha) {
  MonomialRep poly(p, n);
  const int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  // Small spaces may hold fewer admissible monomials than requested, so the
  // number of draws is bounded once a term exists.
  for (int draws = 0; static_cast<int>(poly.terms().size()) < terms; ++draws) {
    if (draws >= 16 * max_terms && !poly.terms().empty()) break;
    Monomial m{std::vector<int>(static_cast<std::size_t>(n), 0),
               static_cast<int>(rng.below(static_cast<std::uint64_t>(max_depth + 1)))};
    int sum = 0;
    for (auto& e : m.exps) {
      e = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
      sum += e;
    }
    if (sum == 0 || sum + m.depth * (p - 1) > max_degree) continue;
    poly.set_term(m, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 1))));
  }
  if (with_alpha) poly.set_alpha(TorusValue(p, 0, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)))));
  return poly;
}

ComplexFn random_unit_fn(int p, int n, Rng& rng) {
  const Space& space = cached_space(p, n);
  std::vector<double> v(space.size());
  for (auto& x : v) x = rng.uniform();
  return ComplexFn::from_real(p, n, v);
}

ComplexFn random_bounded_fn(int p, int n, Rng& rng) {
  const Space& space = cached_space(p, n);
  std::vector<Complex> v(space.size());
  for (auto& x : v) {
    const double r = std::sqrt(rng.uniform());
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    x = std::polar(r, t);
  }
  return ComplexFn(p, n, std::move(v));
}

Coloring linear_coloring(int p, int n, const std::vector<int>& a) {
  const Space& space = cached_space(p, n);
  std::vector<int> values(space.size());
  for (Point x = 0; x < space.size(); ++x) {
    int s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * space.coord(x, i);
    values[x] = s % p;
  }
  return Coloring(p, n, ColorSet::numbered(p), std::move(values));
}

}  // namespace hofa::gen
