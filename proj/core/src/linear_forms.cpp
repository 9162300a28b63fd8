#include "hofa/linear_forms.hpp"

#include <functional>

#include "hofa/errors.hpp"
#include "hofa/linalg.hpp"

namespace hofa {

void LinearSystem::validate() const {
  require_prime(p);
  if (vars < 1) throw InvalidParameter("a linear system needs at least one variable");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != vars) {
      throw ShapeError("form " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                       " coefficients, expected " + std::to_string(vars));
    }
  }
}

LinearSystem canonical_system(int p, int ell, SystemKind kind) {
  const Space coeffs(p, ell);
  LinearSystem sys{p, ell, {}};
  for (Point i = 0; i < coeffs.size(); ++i) {
    if (kind == SystemKind::projective && coeffs.fnz(i) != 1) continue;
    sys.rows.push_back(coeffs.coords(i));
  }
  return sys;
}

std::vector<Point> evaluate(const LinearSystem& system, const Space& space,
                            std::span<const Point> x) {
  if (static_cast<int>(x.size()) != system.vars) throw ShapeError("wrong number of arguments");
  if (space.p() != system.p) throw ShapeError("system and space over different primes");
  std::vector<Point> out;
  out.reserve(system.rows.size());
  for (const auto& row : system.rows) out.push_back(space.combine(row, x));
  return out;
}

std::vector<int> symmetric_tensor_power(std::span<const int> coeffs, int power, int p) {
  const int ell = static_cast<int>(coeffs.size());
  std::vector<int> out;
  std::vector<int> idx(power, 0);
  std::function<void(int, int, int)> rec = [&](int pos, int start, int prod) {
    if (pos == power) {
      out.push_back(prod);
      return;
    }
    for (int i = start; i < ell; ++i) {
      idx[pos] = i;
      rec(pos + 1, i, static_cast<int>(mod_floor(static_cast<std::int64_t>(prod) * coeffs[i], p)));
    }
  };
  rec(0, 0, 1);
  return out;
}

Classification classify(const LinearSystem& system) {
  system.validate();
  const int p = system.p;
  Classification c;
  c.translation_invariant = true;
  for (const auto& row : system.rows) {
    if (mod_floor(row[0], p) != 1) c.translation_invariant = false;
  }

  // Finite complexity: every form nonzero and no two forms proportional.
  bool finite = true;
  for (std::size_t i = 0; i < system.rows.size() && finite; ++i) {
    if (rank_mod_p({system.rows[i]}, p) == 0) finite = false;
    for (std::size_t j = i + 1; j < system.rows.size() && finite; ++j) {
      if (rank_mod_p({system.rows[i], system.rows[j]}, p) < 2) finite = false;
    }
  }
  c.finite_complexity = finite;
  if (!finite) return c;

  const int m = system.size();
  const int cap = std::max(m - 2, 0);
  for (int d = 0; d <= cap; ++d) {
    FpMatrix tensors;
    for (const auto& row : system.rows) tensors.push_back(symmetric_tensor_power(row, d + 1, p));
    if (rank_mod_p(tensors, p) == m) {
      c.complexity = d;
      return c;
    }
  }
  c.complexity = cap;
  c.cap_hit = true;
  return c;
}

}  // namespace hofa
