#include "hofa/field.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <tuple>

#include "hofa/caps.hpp"
#include "hofa/errors.hpp"

namespace hofa {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

void require_prime(int p) {
  if (!is_prime(p) || p > 251) {
    throw InvalidParameter("p must be a prime at most 251, got " + std::to_string(p));
  }
}

std::int64_t checked_pow(std::int64_t base, int exp) {
  if (exp < 0) throw InvalidParameter("negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::int64_t>::max() / 4 / base) {
      throw CapExceeded("integer power " + std::to_string(base) + "^" + std::to_string(exp) +
                        " exceeds 62 bits");
    }
    r *= base;
  }
  return r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  __extension__ using wide = __int128;
  return static_cast<std::int64_t>(static_cast<wide>(mod_floor(a, m)) * mod_floor(b, m) % m);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
  while (a1 != 0) {
    const std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw InvalidParameter(std::to_string(a) + " is not a unit mod " + std::to_string(m));
  return mod_floor(x, m);
}

FpScalar fnz(const FpVector& x) {
  for (const int c : x.coords) {
    const int v = static_cast<int>(mod_floor(c, x.p));
    if (v != 0) return {x.p, v};
  }
  return {x.p, 0};
}

// ---------------------------------------------------------------------------
// Space

namespace {
constexpr Point kAddTableLimit = 1024;
constexpr Point kScaleTableLimit = 1u << 15;
}  // namespace

Space::Space(int p, int n) : p_(p), n_(n) {
  require_prime(p);
  if (n < 0) throw InvalidParameter("dimension must be nonnegative");
  const std::int64_t size = checked_pow(p, n);
  if (size > (std::int64_t{1} << 31)) {
    throw CapExceeded("F_" + std::to_string(p) + "^" + std::to_string(n) + " is too large to index");
  }
  size_ = static_cast<Point>(size);
  pow_.resize(n + 1);
  pow_[0] = 1;
  for (int i = 1; i <= n; ++i) pow_[i] = pow_[i - 1] * static_cast<Point>(p);

  if (p != 2 && size_ <= kScaleTableLimit) {
    auto table = std::make_shared<std::vector<Point>>(static_cast<std::size_t>(p) * size_);
    for (int c = 0; c < p; ++c) {
      for (Point x = 0; x < size_; ++x) {
        Point r = 0;
        for (int i = 0; i < n; ++i) r += static_cast<Point>((c * coord(x, i)) % p) * pow_[i];
        (*table)[static_cast<std::size_t>(c) * size_ + x] = r;
      }
    }
    scale_table_ = std::move(table);
  }
  if (p != 2 && size_ <= kAddTableLimit) {
    auto table = std::make_shared<std::vector<Point>>(static_cast<std::size_t>(size_) * size_);
    for (Point a = 0; a < size_; ++a) {
      for (Point b = 0; b < size_; ++b) {
        Point r = 0;
        for (int i = 0; i < n; ++i) {
          r += static_cast<Point>((coord(a, i) + coord(b, i)) % p) * pow_[i];
        }
        (*table)[static_cast<std::size_t>(a) * size_ + b] = r;
      }
    }
    add_table_ = std::move(table);
  }
}

std::vector<int> Space::coords(Point x) const {
  std::vector<int> c(n_);
  for (int i = 0; i < n_; ++i) {
    c[i] = static_cast<int>(x % p_);
    x /= p_;
  }
  return c;
}

Point Space::from_coords(std::span<const int> c) const {
  if (static_cast<int>(c.size()) != n_) throw ShapeError("coordinate vector has wrong length");
  Point r = 0;
  for (int i = 0; i < n_; ++i) r += static_cast<Point>(mod_floor(c[i], p_)) * pow_[i];
  return r;
}

Point Space::add(Point a, Point b) const {
  if (p_ == 2) return a ^ b;
  if (add_table_) return (*add_table_)[static_cast<std::size_t>(a) * size_ + b];
  Point r = 0;
  for (int i = 0; i < n_; ++i) {
    const Point da = (a / pow_[i]) % p_;
    const Point db = (b / pow_[i]) % p_;
    r += ((da + db) % p_) * pow_[i];
  }
  return r;
}

Point Space::scale(int c, Point a) const {
  c = static_cast<int>(mod_floor(c, p_));
  if (p_ == 2) return c == 0 ? 0 : a;
  if (scale_table_) return (*scale_table_)[static_cast<std::size_t>(c) * size_ + a];
  Point r = 0;
  for (int i = 0; i < n_; ++i) {
    const Point da = (a / pow_[i]) % p_;
    r += ((da * static_cast<Point>(c)) % p_) * pow_[i];
  }
  return r;
}

Point Space::combine(std::span<const int> c, std::span<const Point> v) const {
  if (c.size() != v.size()) throw ShapeError("coefficient and point lists differ in length");
  Point r = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (mod_floor(c[j], p_) != 0) r = add(r, scale(c[j], v[j]));
  }
  return r;
}

int Space::fnz(Point x) const {
  const int i = fnz_index(x);
  return i == 0 ? 0 : coord(x, i - 1);
}

int Space::fnz_index(Point x) const {
  for (int i = 0; i < n_; ++i) {
    if (coord(x, i) != 0) return i + 1;
  }
  return 0;
}

const Space& cached_space(int p, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Space>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) slot = std::make_unique<Space>(p, n);
  return *slot;
}

// ---------------------------------------------------------------------------
// TorusValue

TorusValue::TorusValue(int p, int depth, std::int64_t residue) : p_(p), depth_(depth) {
  if (depth < 0) throw InvalidParameter("torus depth must be nonnegative");
  residue_ = mod_floor(residue, modulus());
}

std::int64_t TorusValue::modulus() const { return checked_pow(p_, depth_ + 1); }

TorusValue TorusValue::embed(int depth) const {
  if (depth < depth_) {
    throw ShapeError("cannot embed U_" + std::to_string(depth_ + 1) + " into U_" +
                     std::to_string(depth + 1));
  }
  return TorusValue(p_, depth, residue_ * checked_pow(p_, depth - depth_));
}

TorusValue TorusValue::normalized() const {
  TorusValue r = *this;
  while (r.depth_ > 0 && r.residue_ % r.p_ == 0) {
    r.residue_ /= r.p_;
    --r.depth_;
  }
  return r;
}

double TorusValue::to_real() const {
  return static_cast<double>(residue_) / static_cast<double>(modulus());
}

TorusValue TorusValue::zmul(std::int64_t z) const {
  return TorusValue(p_, depth_, mul_mod(residue_, z, modulus()));
}

TorusValue operator+(const TorusValue& a, const TorusValue& b) {
  if (a.p_ != b.p_) throw ShapeError("torus values over different primes");
  if (a.depth_ != b.depth_) {
    throw ShapeError("torus values at depths " + std::to_string(a.depth_) + " and " + std::to_string(b.depth_) +
                     "; embed them first");
  }
  return TorusValue(a.p_, a.depth_, a.residue_ + b.residue_);
}

TorusValue operator-(const TorusValue& a, const TorusValue& b) { return a + (-b); }

TorusValue TorusValue::operator-() const { return TorusValue(p_, depth_, -residue_); }

bool TorusValue::same_value(const TorusValue& o) const {
  if (p_ != o.p_) return false;
  const TorusValue a = normalized();
  const TorusValue b = o.normalized();
  return a.depth_ == b.depth_ && a.residue_ == b.residue_;
}

// ---------------------------------------------------------------------------
// Parameter lists and atoms

std::string to_string(const DegreeDepth& dk) {
  return "(" + std::to_string(dk.degree) + "," + std::to_string(dk.depth) + ")";
}

int max_depth(int p, int d) { return d <= 0 ? -1 : (d - 1) / (p - 1); }

bool in_domain(int p, DegreeDepth dk) {
  return dk.degree > 0 && dk.depth >= 0 && dk.depth <= max_depth(p, dk.degree);
}

ParameterList::ParameterList(int p) : p_(p) { require_prime(p); }

ParameterList::ParameterList(int p, std::initializer_list<std::pair<const DegreeDepth, int>> counts)
    : ParameterList(p) {
  for (const auto& [dk, c] : counts) set(dk, c);
}

int ParameterList::count(DegreeDepth dk) const {
  const auto it = counts_.find(dk);
  return it == counts_.end() ? 0 : it->second;
}

void ParameterList::set(DegreeDepth dk, int count) {
  if (!in_domain(p_, dk)) {
    throw InvalidParameter("(d,k) = " + to_string(dk) + " is not in D_" + std::to_string(p_));
  }
  if (count < 0) throw InvalidParameter("parameter counts must be nonnegative");
  if (count == 0) {
    counts_.erase(dk);
  } else {
    counts_[dk] = count;
  }
}

int ParameterList::log_norm() const {
  int e = 0;
  for (const auto& [dk, c] : counts_) e += (dk.depth + 1) * c;
  return e;
}

std::uint64_t ParameterList::norm() const {
  return static_cast<std::uint64_t>(checked_pow(p_, log_norm()));
}

int ParameterList::degree() const { return counts_.empty() ? 0 : counts_.rbegin()->first.degree; }

int ParameterList::total_slots() const {
  int s = 0;
  for (const auto& [dk, c] : counts_) s += c;
  return s;
}

std::vector<DegreeDepth> ParameterList::slot_types() const {
  std::vector<DegreeDepth> out;
  for (const auto& [dk, c] : counts_) out.insert(out.end(), c, dk);
  return out;
}

int ParameterList::slot_offset(DegreeDepth dk, int i) const {
  int off = 0;
  for (const auto& [key, c] : counts_) {
    if (key == dk) {
      if (i < 1 || i > c) throw ShapeError("slot index out of range for " + to_string(dk));
      return off + i - 1;
    }
    off += c;
  }
  throw ShapeError("no slot of type " + to_string(dk));
}

bool ParameterList::is_le(const ParameterList& o) const {
  if (p_ != o.p_) return false;
  for (const auto& [dk, c] : counts_) {
    if (o.count(dk) < c) return false;
  }
  return true;
}

ParameterList ParameterList::operator+(const ParameterList& o) const {
  if (p_ != o.p_) throw ShapeError("parameter lists over different primes");
  ParameterList r = *this;
  for (const auto& [dk, c] : o.counts_) r.set(dk, r.count(dk) + c);
  return r;
}

std::string to_string(const ParameterList& params) {
  std::string s = "{";
  bool first = true;
  for (const auto& [dk, c] : params.counts()) {
    if (!first) s += ",";
    first = false;
    s += to_string(dk) + ":" + std::to_string(c);
  }
  return s + "}";
}

namespace {

void check_atom_shape(const ParameterList& params, const Atom& a) {
  if (static_cast<int>(a.residues.size()) != params.total_slots()) {
    throw ShapeError("atom has " + std::to_string(a.residues.size()) + " entries, expected " +
                     std::to_string(params.total_slots()));
  }
}

}  // namespace

std::uint64_t atom_rank(const ParameterList& params, const Atom& a) {
  check_atom_shape(params, a);
  params.norm();
  const auto types = params.slot_types();
  std::uint64_t r = 0;
  for (std::size_t s = 0; s < types.size(); ++s) {
    const std::int64_t m = checked_pow(params.p(), types[s].depth + 1);
    const std::int64_t v = a.residues[s];
    if (v < 0 || v >= m) throw ShapeError("atom entry out of range");
    r = r * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(v);
  }
  return r;
}

Atom atom_unrank(const ParameterList& params, std::uint64_t rank) {
  const auto types = params.slot_types();
  if (rank >= params.norm()) throw ShapeError("atom rank out of range");
  Atom a;
  a.residues.resize(types.size());
  for (std::size_t s = types.size(); s-- > 0;) {
    const auto m = static_cast<std::uint64_t>(checked_pow(params.p(), types[s].depth + 1));
    a.residues[s] = static_cast<std::int64_t>(rank % m);
    rank /= m;
  }
  return a;
}

std::vector<Atom> enumerate_atoms(const ParameterList& params) {
  const std::uint64_t n = params.norm();
  require_within_cap(n, "atom enumeration");
  std::vector<Atom> out;
  out.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) out.push_back(atom_unrank(params, r));
  return out;
}

Atom atom_project(const ParameterList& from, const Atom& a, const ParameterList& to) {
  check_atom_shape(from, a);
  if (!to.is_le(from)) throw ShapeError("projection target is not below the source parameters");
  Atom r;
  int off = 0;
  for (const auto& [dk, c] : from.counts()) {
    const int keep = to.count(dk);
    for (int i = 0; i < keep; ++i) r.residues.push_back(a.residues[off + i]);
    off += c;
  }
  return r;
}

Atom atom_act(const ParameterList& params, int c, const Atom& a) {
  check_atom_shape(params, a);
  const int p = params.p();
  c = static_cast<int>(mod_floor(c, p));
  if (c == 0) throw InvalidParameter("the action is defined for units only");
  Atom r = a;
  int off = 0;
  for (const auto& [dk, cnt] : params.counts()) {
    const std::int64_t s = sigma(p, c, dk.degree, dk.depth);
    const std::int64_t m = checked_pow(p, dk.depth + 1);
    for (int i = 0; i < cnt; ++i) r.residues[off + i] = mul_mod(a.residues[off + i], s, m);
    off += cnt;
  }
  return r;
}

TorusValue atom_entry(const ParameterList& params, const Atom& a, int slot) {
  check_atom_shape(params, a);
  const auto types = params.slot_types();
  return TorusValue(params.p(), types.at(slot).depth, a.residues.at(slot));
}

// ---------------------------------------------------------------------------
// Teichmuller lifts and sigma

namespace {

std::int64_t power_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b = mod_floor(b, m);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Finds the unique t in Z/p^{depth+1} with t = target (mod p) and t^{p-1} = 1
// by scanning the p^depth lifts of the target residue.
std::int64_t unit_root_lift(int p, std::int64_t target, int depth) {
  const std::int64_t m = checked_pow(p, depth + 1);
  std::int64_t found = -1;
  for (std::int64_t t = target; t < m; t += p) {
    if (power_mod(t, p - 1, m) == 1) {
      if (found >= 0) throw InternalError("unit root lift is not unique");
      found = t;
    }
  }
  if (found < 0) throw InternalError("no unit root lift exists");
  return found;
}

}  // namespace

std::int64_t teichmuller(int p, int b, int depth) {
  require_prime(p);
  const auto bb = mod_floor(b, p);
  if (bb == 0) throw InvalidParameter("Teichmuller lift requires a unit");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::int64_t> cache;
  const auto key = std::make_tuple(p, static_cast<int>(bb), depth);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const std::int64_t t = unit_root_lift(p, bb, depth);
  std::lock_guard lock(mu);
  cache.emplace(key, t);
  return t;
}

std::int64_t sigma(int p, int b, int d, int k) {
  require_prime(p);
  if (!in_domain(p, {d, k})) {
    throw InvalidParameter("sigma is defined on D_p only; got " + to_string(DegreeDepth{d, k}));
  }
  const auto bb = mod_floor(b, p);
  if (bb == 0) throw InvalidParameter("sigma is defined for units only");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::int64_t> cache;
  const auto key = std::make_tuple(p, static_cast<int>(bb), d, k);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const std::int64_t s = unit_root_lift(p, power_mod(bb, d, p), k);
  std::lock_guard lock(mu);
  cache.emplace(key, s);
  return s;
}

}  // namespace hofa
