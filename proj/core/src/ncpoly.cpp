#include "hofa/ncpoly.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "hofa/caps.hpp"
#include "hofa/errors.hpp"
#include "hofa/linalg.hpp"

namespace hofa {

// ---------------------------------------------------------------------------
// ValueTable

ValueTable::ValueTable(int p, int n, int depth, std::vector<std::int64_t> residues)
    : p_(p), n_(n), depth_(depth), residues_(std::move(residues)) {
  require_prime(p);
  if (depth < 0) throw InvalidParameter("table depth must be nonnegative");
  if (static_cast<std::int64_t>(residues_.size()) != checked_pow(p, n)) {
    throw ShapeError("table has " + std::to_string(residues_.size()) + " entries, expected " +
                     std::to_string(p) + "^" + std::to_string(n));
  }
  const std::int64_t m = modulus();
  for (auto& r : residues_) r = mod_floor(r, m);
}

ValueTable ValueTable::zero(int p, int n, int depth) {
  return ValueTable(p, n, depth, std::vector<std::int64_t>(checked_pow(p, n), 0));
}

ValueTable ValueTable::constant(int p, int n, const TorusValue& v) {
  if (v.p() != p) throw ShapeError("constant over a different prime");
  return ValueTable(p, n, v.depth(), std::vector<std::int64_t>(checked_pow(p, n), v.residue()));
}

std::int64_t ValueTable::modulus() const { return checked_pow(p_, depth_ + 1); }

ValueTable ValueTable::embed(int depth) const {
  if (depth < depth_) throw ShapeError("cannot embed a table into a smaller depth");
  const std::int64_t f = checked_pow(p_, depth - depth_);
  std::vector<std::int64_t> r(residues_);
  for (auto& x : r) x *= f;
  return ValueTable(p_, n_, depth, std::move(r));
}

ValueTable ValueTable::normalized() const {
  ValueTable t = *this;
  while (t.depth_ > 0 &&
         std::all_of(t.residues_.begin(), t.residues_.end(), [&](auto r) { return r % t.p_ == 0; })) {
    for (auto& r : t.residues_) r /= t.p_;
    --t.depth_;
  }
  return t;
}

bool ValueTable::is_zero() const {
  return std::all_of(residues_.begin(), residues_.end(), [](auto r) { return r == 0; });
}

bool ValueTable::is_constant() const {
  return std::all_of(residues_.begin(), residues_.end(), [&](auto r) { return r == residues_[0]; });
}

ValueTable ValueTable::zmul(std::int64_t z) const {
  const std::int64_t m = modulus();
  std::vector<std::int64_t> r(residues_);
  for (auto& x : r) x = mul_mod(x, z, m);
  return ValueTable(p_, n_, depth_, std::move(r));
}

namespace {

void check_same_domain(const ValueTable& a, const ValueTable& b) {
  if (a.p() != b.p() || a.dim() != b.dim()) throw ShapeError("tables on different spaces");
}

}  // namespace

ValueTable operator+(const ValueTable& a, const ValueTable& b) {
  check_same_domain(a, b);
  if (a.depth_ != b.depth_) {
    throw ShapeError("value tables at depths " + std::to_string(a.depth_) + " and " + std::to_string(b.depth_) +
                     "; embed them first");
  }
  std::vector<std::int64_t> r = a.residues_;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.residues_[i];
  return ValueTable(a.p_, a.n_, a.depth_, std::move(r));
}

ValueTable operator-(const ValueTable& a, const ValueTable& b) { return a + b.zmul(-1); }

bool ValueTable::same_function(const ValueTable& o) const {
  if (p_ != o.p_ || n_ != o.n_) return false;
  const int depth = std::max(depth_, o.depth_);
  return embed(depth).residues_ == o.embed(depth).residues_;
}

std::size_t ValueTableHash::operator()(const ValueTable& t) const noexcept {
  std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(t.depth());
  for (auto r : t.residues()) {
    h ^= static_cast<std::uint64_t>(r);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

ValueTable derivative(const ValueTable& t, Point h) {
  const Space& s = cached_space(t.p(), t.dim());
  std::vector<std::int64_t> r(t.size());
  for (Point x = 0; x < t.size(); ++x) r[x] = t.residue(s.add(x, h)) - t.residue(x);
  return ValueTable(t.p(), t.dim(), t.depth(), std::move(r));
}

ValueTable compose_linear(const ValueTable& t, std::span<const Point> images, Point base) {
  const Space& src = cached_space(t.p(), t.dim());
  const int m = static_cast<int>(images.size());
  const Space& dst = cached_space(t.p(), m);
  std::vector<std::int64_t> r(dst.size());
  // Walk F_p^m in index order keeping the image point up to date.
  std::vector<int> digits(m, 0);
  Point img = base;
  for (Point y = 0; y < dst.size(); ++y) {
    r[y] = t.residue(img);
    int j = 0;
    while (j < m) {
      img = src.add(img, images[j]);
      if (++digits[j] < t.p()) break;
      digits[j] = 0;  // wrapped: p additions of images[j] returned img to its old value
      ++j;
    }
  }
  return ValueTable(t.p(), m, t.depth(), std::move(r));
}

// ---------------------------------------------------------------------------
// MonomialRep

int Monomial::total() const {
  int s = 0;
  for (int e : exps) s += e;
  return s;
}

MonomialRep::MonomialRep(int p, int n) : p_(p), n_(n), alpha_(TorusValue::zero(p)) {
  require_prime(p);
  if (n < 0) throw InvalidParameter("dimension must be nonnegative");
}

void MonomialRep::set_alpha(const TorusValue& a) {
  if (a.p() != p_) throw ShapeError("constant term over a different prime");
  alpha_ = a.normalized();
}

void MonomialRep::set_term(const Monomial& m, int c) {
  if (static_cast<int>(m.exps.size()) != n_) {
    throw ShapeError("monomial has " + std::to_string(m.exps.size()) + " exponents, expected " +
                     std::to_string(n_));
  }
  if (m.depth < 0) throw InvalidParameter("monomial depth must be nonnegative");
  for (int e : m.exps) {
    if (e < 0 || e >= p_) throw InvalidParameter("monomial exponents must lie in [0, p)");
  }
  if (m.total() == 0) throw InvalidParameter("monomials must have positive total degree");
  checked_pow(p_, m.depth + 1);
  c = static_cast<int>(mod_floor(c, p_));
  if (c == 0) {
    terms_.erase(m);
  } else {
    terms_[m] = c;
  }
}

int MonomialRep::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

int MonomialRep::value_depth() const {
  int k = alpha_.depth();
  for (const auto& [m, c] : terms_) k = std::max(k, m.depth);
  return k;
}

TorusValue MonomialRep::evaluate(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != n_) throw ShapeError("point has wrong dimension");
  const int depth = value_depth();
  const std::int64_t mod = checked_pow(p_, depth + 1);
  std::int64_t r = alpha_.embed(depth).residue();
  for (const auto& [m, c] : terms_) {
    const std::int64_t mk = checked_pow(p_, m.depth + 1);
    std::int64_t prod = c;
    for (int j = 0; j < n_ && prod != 0; ++j) {
      const std::int64_t xj = mod_floor(x[j], p_);
      for (int e = 0; e < m.exps[j]; ++e) prod = mul_mod(prod, xj, mk);
    }
    r = mod_floor(r + prod * (mod / mk), mod);
  }
  return TorusValue(p_, depth, r);
}

ValueTable MonomialRep::table() const {
  const Space& s = cached_space(p_, n_);
  require_within_cap(saturating_mul(s.size(), terms_.size() + 1), "polynomial evaluation");
  const int depth = value_depth();
  const std::int64_t mod = checked_pow(p_, depth + 1);
  std::vector<std::int64_t> r(s.size(), alpha_.embed(depth).residue());
  std::vector<int> x(n_, 0);
  for (const auto& [m, c] : terms_) {
    const std::int64_t mk = checked_pow(p_, m.depth + 1);
    const std::int64_t scale = mod / mk;
    // Powers |t|^e mod p^{k+1} for t in [0, p) and e in [0, p).
    std::vector<std::int64_t> pw(static_cast<std::size_t>(p_) * p_, 1);
    for (int t = 0; t < p_; ++t) {
      for (int e = 1; e < p_; ++e) pw[t * p_ + e] = mul_mod(pw[t * p_ + e - 1], t, mk);
    }
    for (Point pt = 0; pt < s.size(); ++pt) {
      std::int64_t prod = c;
      Point rest = pt;
      for (int j = 0; j < n_ && prod != 0; ++j) {
        const int xj = static_cast<int>(rest % p_);
        rest /= p_;
        if (m.exps[j] != 0) prod = mul_mod(prod, pw[xj * p_ + m.exps[j]], mk);
      }
      r[pt] = mod_floor(r[pt] + prod * scale, mod);
    }
  }
  return ValueTable(p_, n_, depth, std::move(r));
}

DegreeDepth MonomialRep::degree_depth() const {
  DegreeDepth dk{0, 0};
  for (const auto& [m, c] : terms_) {
    dk.degree = std::max(dk.degree, m.total() + m.depth * (p_ - 1));
    dk.depth = std::max(dk.depth, m.depth);
  }
  return dk;
}

MonomialRep MonomialRep::embed_variables(int new_dim, int offset) const {
  if (offset < 0 || offset + n_ > new_dim) throw ShapeError("variable embedding out of range");
  MonomialRep r(p_, new_dim);
  r.set_alpha(alpha_);
  for (const auto& [m, c] : terms_) {
    Monomial mm{std::vector<int>(new_dim, 0), m.depth};
    std::copy(m.exps.begin(), m.exps.end(), mm.exps.begin() + offset);
    r.set_term(mm, c);
  }
  return r;
}

std::string to_string(const MonomialRep& rep) {
  std::string s;
  if (!rep.alpha().is_zero() || rep.terms().empty()) {
    s = std::to_string(rep.alpha().residue()) + "/" + std::to_string(rep.alpha().modulus());
  }
  for (const auto& [m, c] : rep.terms()) {
    if (!s.empty()) s += " + ";
    s += std::to_string(c) + "*";
    bool any = false;
    for (std::size_t j = 0; j < m.exps.size(); ++j) {
      if (m.exps[j] == 0) continue;
      if (any) s += "*";
      any = true;
      s += "|x" + std::to_string(j + 1) + "|";
      if (m.exps[j] > 1) s += "^" + std::to_string(m.exps[j]);
    }
    s += "/" + std::to_string(checked_pow(rep.p(), m.depth + 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Interpolation

namespace {

// Applies the p x p matrix `w` along every axis of a tensor indexed like F_p^n.
void axis_transform(std::vector<std::int64_t>& v, int p, int n,
                    const std::vector<std::vector<std::int64_t>>& w, std::int64_t mod) {
  std::size_t stride = 1;
  std::vector<std::int64_t> line(p), out(p);
  for (int axis = 0; axis < n; ++axis) {
    const std::size_t block = stride * p;
    for (std::size_t base = 0; base < v.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (int t = 0; t < p; ++t) line[t] = v[base + off + t * stride];
        for (int i = 0; i < p; ++i) {
          std::int64_t acc = 0;
          for (int t = 0; t < p; ++t) acc = mod_floor(acc + mul_mod(w[i][t], line[t], mod), mod);
          out[i] = acc;
        }
        for (int i = 0; i < p; ++i) v[base + off + i * stride] = out[i];
      }
    }
    stride = block;
  }
}

// Vandermonde matrix V[x][i] = x^i mod `mod` with 0^0 = 1.
std::vector<std::vector<std::int64_t>> vandermonde(int p, std::int64_t mod) {
  std::vector<std::vector<std::int64_t>> v(p, std::vector<std::int64_t>(p, 1));
  for (int x = 0; x < p; ++x) {
    for (int i = 1; i < p; ++i) v[x][i] = mul_mod(v[x][i - 1], x, mod);
  }
  return v;
}

const std::vector<std::vector<std::int64_t>>& inverse_vandermonde(int p) {
  static std::mutex mu;
  static std::map<int, std::vector<std::vector<std::int64_t>>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  const auto v = vandermonde(p, p);
  FpMatrix m(p, std::vector<int>(p));
  for (int x = 0; x < p; ++x) {
    for (int i = 0; i < p; ++i) m[x][i] = static_cast<int>(v[x][i]);
  }
  const FpMatrix inv = inverse_mod_p(m, p);
  std::vector<std::vector<std::int64_t>> w(p, std::vector<std::int64_t>(p));
  for (int i = 0; i < p; ++i) {
    for (int x = 0; x < p; ++x) w[i][x] = inv[i][x];
  }
  return cache.emplace(p, std::move(w)).first->second;
}

}  // namespace

MonomialRep interpolate(const ValueTable& table) {
  const int p = table.p();
  const int n = table.dim();
  const Space& s = cached_space(p, n);
  MonomialRep rep(p, n);
  const TorusValue alpha = table.at(0).normalized();
  rep.set_alpha(alpha);

  ValueTable rest = (table - ValueTable::constant(p, n, alpha.embed(table.depth()))).normalized();
  std::vector<std::int64_t> q = rest.residues();
  const auto& w = inverse_vandermonde(p);
  for (int k = rest.depth(); k >= 0; --k) {
    const std::int64_t mod = checked_pow(p, k + 1);
    std::vector<std::int64_t> coeffs(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) coeffs[i] = q[i] % p;
    axis_transform(coeffs, p, n, w, p);
    bool any = false;
    for (Point e = 0; e < s.size(); ++e) {
      if (coeffs[e] == 0) continue;
      if (e == 0) throw InternalError("interpolation produced a constant term");
      rep.set_term({s.coords(e), k}, static_cast<int>(coeffs[e]));
      any = true;
    }
    if (any) {
      // Subtract sum_e c_e |x|^e / p^{k+1} evaluated with integer powers.
      axis_transform(coeffs, p, n, vandermonde(p, mod), mod);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = mod_floor(q[i] - coeffs[i], mod);
    }
    for (auto& r : q) {
      if (r % p != 0) throw InternalError("interpolation left a nonzero top layer");
      r /= p;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Degree and depth from the definitions

DegreeDepth degree_depth_from_table(const ValueTable& t) {
  if (t.size() > derivative_check_limit) {
    throw CapExceeded("derivative-based degree check limited to p^n <= " +
                      std::to_string(derivative_check_limit));
  }
  const int p = t.p();
  const int n = t.dim();
  const Space& s = cached_space(p, n);
  const ValueTable shifted = (t - ValueTable::constant(p, n, t.at(0))).normalized();
  DegreeDepth dk{0, shifted.is_zero() ? 0 : shifted.depth()};
  if (shifted.is_zero()) return dk;

  // Iterated derivatives along unit directions with non-decreasing direction
  // index; every h is a sum of unit vectors and D_{h+h'} = D_h + D_{h'} +
  // D_{h'} D_h, so these detect the degree.
  struct Node {
    ValueTable table;
    int last_dir;
  };
  std::vector<Node> level{{t.normalized(), 0}};
  const int bound = (n + shifted.depth()) * (p - 1) + 2;
  for (int j = 1; j <= bound; ++j) {
    // Equal tables only need expanding from their smallest admissible direction.
    std::unordered_map<ValueTable, int, ValueTableHash> first_dir;
    for (const auto& node : level) {
      for (int dir = node.last_dir; dir < n; ++dir) {
        ValueTable d = derivative(node.table, s.unit(dir)).normalized();
        if (d.is_zero()) continue;
        auto [it, inserted] = first_dir.try_emplace(std::move(d), dir);
        if (!inserted) it->second = std::min(it->second, dir);
      }
    }
    std::vector<Node> next;
    next.reserve(first_dir.size());
    for (auto& [table, dir] : first_dir) next.push_back({table, dir});
    if (next.empty()) {
      dk.degree = j - 1;
      return dk;
    }
    level = std::move(next);
  }
  throw InternalError("degree search exceeded its a priori bound");
}

// ---------------------------------------------------------------------------
// Homogeneity

namespace {

bool check_sigma_relation(const ValueTable& t, DegreeDepth dk) {
  const int p = t.p();
  const Space& s = cached_space(p, t.dim());
  const std::int64_t mod = t.modulus();
  for (int b = 2; b < p; ++b) {
    const std::int64_t sg = dk.degree == 0 ? 1 : sigma(p, b, dk.degree, dk.depth);
    for (Point x = 0; x < t.size(); ++x) {
      if (t.residue(s.scale(b, x)) != mul_mod(sg, t.residue(x), mod)) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<HomogeneousPoly> certify_homogeneous(const MonomialRep& poly) {
  const DegreeDepth dk = poly.degree_depth();
  if (dk.degree > 0 && !in_domain(poly.p(), dk)) {
    throw InternalError("polynomial violates the depth bound " + to_string(dk));
  }
  if (!check_sigma_relation(poly.table(), dk)) return std::nullopt;
  return HomogeneousPoly{poly, dk};
}

bool is_homogeneous(const MonomialRep& poly) { return certify_homogeneous(poly).has_value(); }

ValueTable character_projection(const ValueTable& t, int j) {
  const int p = t.p();
  const Space& s = cached_space(p, t.dim());
  const std::int64_t mod = t.modulus();
  const std::int64_t inv = inverse_mod(p - 1, mod);
  std::vector<std::int64_t> out(t.size(), 0);
  for (int b = 1; b < p; ++b) {
    // teichmuller(b)^{-j} = teichmuller(b^{-1})^j.
    const int binv = static_cast<int>(inverse_mod(b, p));
    std::int64_t w = 1;
    const std::int64_t tb = teichmuller(p, binv, t.depth());
    for (int e = 0; e < j; ++e) w = mul_mod(w, tb, mod);
    for (Point x = 0; x < t.size(); ++x) {
      out[x] = mod_floor(out[x] + mul_mod(w, t.residue(s.scale(b, x)), mod), mod);
    }
  }
  for (auto& r : out) r = mul_mod(r, inv, mod);
  return ValueTable(p, t.dim(), t.depth(), std::move(out)).normalized();
}

std::vector<HomogeneousPoly> homogeneous_decomposition(const MonomialRep& poly) {
  const int p = poly.p();
  const int n = poly.dim();
  const ValueTable whole = poly.table();

  // Split the non-constant terms by the (degree, depth) of each monomial and
  // project every group onto the characters of F_p^*.
  std::map<DegreeDepth, MonomialRep> groups;
  for (const auto& [m, c] : poly.terms()) {
    const DegreeDepth key{m.total() + m.depth * (p - 1), m.depth};
    auto [it, inserted] = groups.try_emplace(key, p, n);
    it->second.set_term(m, c);
  }
  std::vector<ValueTable> pieces;
  for (const auto& [key, g] : groups) {
    const ValueTable gt = g.table();
    for (int j = 0; j < p - 1; ++j) {
      ValueTable e = character_projection(gt, j);
      if (!e.is_zero()) pieces.push_back(std::move(e));
    }
  }

  // Merge pieces of equal (degree, depth) until the grouping is stable.
  std::map<DegreeDepth, ValueTable> parts;
  while (!pieces.empty()) {
    std::vector<ValueTable> pending;
    for (auto& piece : pieces) {
      const DegreeDepth key = interpolate(piece).degree_depth();
      auto it = parts.find(key);
      if (it == parts.end()) {
        parts.emplace(key, std::move(piece));
        continue;
      }
      const int depth = std::max(it->second.depth(), piece.depth());
      ValueTable merged = (it->second.embed(depth) + piece.embed(depth)).normalized();
      parts.erase(it);
      if (merged.is_zero()) continue;
      if (interpolate(merged).degree_depth() == key) {
        parts.emplace(key, std::move(merged));
      } else {
        pending.push_back(std::move(merged));
      }
    }
    pieces = std::move(pending);
  }

  std::vector<HomogeneousPoly> out;
  ValueTable total = ValueTable::zero(p, n);
  if (!poly.alpha().is_zero()) {
    MonomialRep c(p, n);
    c.set_alpha(poly.alpha());
    out.push_back({c, {0, 0}});
    total = c.table();
  }
  for (const auto& [key, table] : parts) {
    auto cert = certify_homogeneous(interpolate(table));
    if (!cert || cert->type != key) {
      throw InternalError("decomposition part " + to_string(key) + " failed the homogeneity check");
    }
    const int depth = std::max(total.depth(), table.depth());
    total = total.embed(depth) + table.embed(depth);
    out.push_back(std::move(*cert));
  }
  if (!total.same_function(whole)) throw InternalError("decomposition does not sum to the input");
  return out;
}

HomogeneousPoly univariate_homogeneous(int p, int d, int k) {
  require_prime(p);
  if (!in_domain(p, {d, k})) {
    throw InvalidParameter("(d,k) = " + to_string(DegreeDepth{d, k}) + " is not in D_" +
                           std::to_string(p));
  }
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, HomogeneousPoly> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({p, d, k}); it != cache.end()) return it->second;
  }
  // Slots s = k'(p-1) + (i'-1) carry the coefficient of |x|^{i'} / p^{k'+1};
  // the top slot must be (i, k) for the degree to equal k(p-1) + i.
  const int i = (d - 1) % (p - 1) + 1;
  const int top = k * (p - 1) + (i - 1);
  const std::int64_t lo = checked_pow(p, top);
  const std::int64_t hi = checked_pow(p, top + 1);
  require_within_cap(static_cast<std::uint64_t>(hi - lo), "univariate homogeneous search");
  for (std::int64_t t = lo; t < hi; ++t) {
    MonomialRep rep(p, 1);
    std::int64_t rest = t;
    for (int slot = 0; slot <= top; ++slot) {
      const int c = static_cast<int>(rest % p);
      rest /= p;
      if (c != 0) rep.set_term({{slot % (p - 1) + 1}, slot / (p - 1)}, c);
    }
    if (auto cert = certify_homogeneous(rep)) {
      std::lock_guard lock(mu);
      cache.emplace(std::make_tuple(p, d, k), *cert);
      return *cert;
    }
  }
  throw InternalError("no univariate homogeneous polynomial of type " +
                      to_string(DegreeDepth{d, k}));
}

}  // namespace hofa
