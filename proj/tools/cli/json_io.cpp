#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hofa::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& field(const Json& doc, const char* key, const std::string& where) {
  if (!doc.is_object()) fail(where, "expected an object");
  const auto it = doc.find(key);
  if (it == doc.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t get_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<std::int64_t>();
}

int get_small(const Json& v, const std::string& where, std::int64_t lo, std::int64_t hi) {
  const std::int64_t x = get_int(v, where);
  if (x < lo || x > hi) fail(where, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
  return static_cast<int>(x);
}

int get_prime(const Json& doc, const std::string& where) {
  const int p = get_small(field(doc, "p", where), where + ".p", 2, 1 << 15);
  for (int q = 2; q * q <= p; ++q) {
    if (p % q == 0) fail(where + ".p", std::to_string(p) + " is not prime");
  }
  return p;
}

const Json& get_array(const Json& doc, const char* key, const std::string& where, std::size_t expected) {
  const Json& a = field(doc, key, where);
  if (!a.is_array()) fail(where + "." + key, "expected an array");
  if (expected != 0 && a.size() != expected) {
    fail(where + "." + key, "expected " + std::to_string(expected) + " entries, found " + std::to_string(a.size()));
  }
  return a;
}

Point space_size(int p, int n, const std::string& where) {
  if (n < 0 || n > 30) fail(where + ".n", "dimension outside [0, 30]");
  const std::uint64_t size = saturating_pow(static_cast<std::uint64_t>(p), static_cast<unsigned>(n));
  if (size > (std::uint64_t{1} << 26)) fail(where, "p^n = " + std::to_string(size) + " is too large for a table");
  return static_cast<Point>(size);
}

int color_of(const Json& v, const ColorSet& colors, const std::string& where) {
  if (v.is_string()) {
    const auto c = colors.find(v.get<std::string>());
    if (!c) fail(where, "unknown color \"" + v.get<std::string>() + "\"");
    return *c;
  }
  return get_small(v, where, 0, colors.size() - 1);
}

int line_of(const std::string& bytes, std::size_t offset) {
  offset = std::min(offset, bytes.size());
  return 1 + static_cast<int>(std::count(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

InputFile read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  InputFile out{path, ss.str(), {}};
  try {
    out.doc = Json::parse(out.bytes);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw InputError(path + ":" + std::to_string(line_of(out.bytes, at)) + ": malformed JSON (" + e.what() + ")");
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ColorSet parse_colors(const Json& doc, int p, const std::string& where) {
  const Json& c = field(doc, "colors", where);
  std::vector<std::string> labels;
  if (c.is_number_integer()) {
    const int r = get_small(c, where + ".colors", 1, 1 << 16);
    for (int i = 0; i < r; ++i) labels.push_back(std::to_string(i));
  } else if (c.is_array()) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_string()) fail(where + ".colors[" + std::to_string(i) + "]", "expected a string label");
      labels.push_back(c[i].get<std::string>());
    }
    if (labels.empty()) fail(where + ".colors", "at least one color is required");
  } else {
    fail(where + ".colors", "expected a count or a list of labels");
  }
  const auto it = doc.find("action");
  if (it == doc.end()) return ColorSet(std::move(labels));
  if (!it->is_array() || it->size() != static_cast<std::size_t>(p - 1)) {
    fail(where + ".action", "expected p - 1 rows");
  }
  std::vector<std::vector<int>> action;
  for (std::size_t b = 0; b < it->size(); ++b) {
    const Json& row = (*it)[b];
    const std::string w = where + ".action[" + std::to_string(b) + "]";
    if (!row.is_array() || row.size() != labels.size()) fail(w, "expected one entry per color");
    std::vector<int> r;
    for (std::size_t c2 = 0; c2 < row.size(); ++c2) {
      r.push_back(get_small(row[c2], w + "[" + std::to_string(c2) + "]", 0, static_cast<std::int64_t>(labels.size()) - 1));
    }
    action.push_back(std::move(r));
  }
  try {
    return ColorSet(p, std::move(labels), std::move(action));
  } catch (const Error& e) {
    fail(where + ".action", e.what());
  }
}

Coloring parse_coloring(const Json& doc, const std::string& where) {
  const int p = get_prime(doc, where);
  const int n = get_small(field(doc, "n", where), where + ".n", 0, 30);
  const Point size = space_size(p, n, where);
  const ColorSet colors = parse_colors(doc, p, where);
  const Json& vals = get_array(doc, "values", where, size);
  std::vector<int> values(size);
  for (Point x = 0; x < size; ++x) values[x] = color_of(vals[x], colors, where + ".values[" + std::to_string(x) + "]");
  return Coloring(p, n, colors, std::move(values));
}

ComplexFn parse_function(const Json& doc, const std::string& where, std::optional<int> color) {
  if (color) {
    const Coloring f = parse_coloring(doc, where);
    if (*color < 0 || *color >= f.colors().size()) fail(where, "color " + std::to_string(*color) + " out of range");
    return f.indicator(*color);
  }
  const int p = get_prime(doc, where);
  const int n = get_small(field(doc, "n", where), where + ".n", 0, 30);
  const Point size = space_size(p, n, where);
  std::vector<Complex> values(size);
  if (doc.contains("complex")) {
    const Json& a = get_array(doc, "complex", where, size);
    for (Point x = 0; x < size; ++x) {
      const std::string w = where + ".complex[" + std::to_string(x) + "]";
      if (!a[x].is_array() || a[x].size() != 2 || !a[x][0].is_number() || !a[x][1].is_number()) {
        fail(w, "expected [re, im]");
      }
      values[x] = Complex(a[x][0].get<double>(), a[x][1].get<double>());
    }
  } else {
    const Json& a = get_array(doc, "values", where, size);
    for (Point x = 0; x < size; ++x) {
      if (!a[x].is_number()) fail(where + ".values[" + std::to_string(x) + "]", "expected a number");
      values[x] = a[x].get<double>();
    }
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(where, "values must be finite");
  }
  return ComplexFn(p, n, std::move(values));
}

LinearSystem parse_system(const Json& doc, const std::string& where, std::optional<int> default_p) {
  int p = 0;
  if (doc.is_object() && doc.contains("p")) {
    p = get_prime(doc, where);
  } else if (default_p) {
    p = *default_p;
  } else {
    fail(where, "missing field \"p\"");
  }
  if (doc.contains("canonical")) {
    const int ell = get_small(doc["canonical"], where + ".canonical", 1, 8);
    SystemKind kind = SystemKind::full;
    if (doc.contains("kind")) {
      const Json& k = doc["kind"];
      if (k == "full") {
        kind = SystemKind::full;
      } else if (k == "projective") {
        kind = SystemKind::projective;
      } else {
        fail(where + ".kind", "expected \"full\" or \"projective\"");
      }
    }
    return canonical_system(p, ell, kind);
  }
  LinearSystem s{p, get_small(field(doc, "vars", where), where + ".vars", 1, 16), {}};
  const Json& rows = get_array(doc, "rows", where, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string w = where + ".rows[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(s.vars)) fail(w, "expected vars entries");
    std::vector<int> row;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      row.push_back(static_cast<int>(mod_floor(get_int(rows[i][j], w + "[" + std::to_string(j) + "]"), p)));
    }
    s.rows.push_back(std::move(row));
  }
  try {
    s.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return s;
}

ColoredPattern parse_pattern(const Json& doc, const ColorSet& colors, int p, const std::string& where) {
  ColoredPattern h{parse_system(field(doc, "system", where), where + ".system", p), {}};
  if (h.system.p != p) fail(where + ".system.p", "pattern and coloring use different primes");
  const Json& psi = get_array(doc, "psi", where, h.system.rows.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    h.psi.push_back(color_of(psi[i], colors, where + ".psi[" + std::to_string(i) + "]"));
  }
  try {
    h.validate(colors);
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return h;
}

std::vector<ColoredPattern> parse_family(const Json& doc, const ColorSet& colors, int p, const std::string& where) {
  const Json* list = &doc;
  std::string w = where;
  if (doc.is_object()) {
    list = &get_array(doc, "patterns", where, 0);
    w += ".patterns";
  }
  if (!list->is_array()) fail(where, "expected a list of patterns");
  std::vector<ColoredPattern> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    out.push_back(parse_pattern((*list)[i], colors, p, w + "[" + std::to_string(i) + "]"));
  }
  return out;
}

MonomialRep parse_poly(const Json& doc, const std::string& where) {
  const int p = get_prime(doc, where);
  const int n = get_small(field(doc, "n", where), where + ".n", 0, 30);
  if (doc.contains("residues")) {
    const Point size = space_size(p, n, where);
    const int depth = get_small(field(doc, "depth", where), where + ".depth", 0, 16);
    const Json& r = get_array(doc, "residues", where, size);
    std::vector<std::int64_t> residues(size);
    const std::int64_t mod = checked_pow(p, depth + 1);
    for (Point x = 0; x < size; ++x) {
      residues[x] = mod_floor(get_int(r[x], where + ".residues[" + std::to_string(x) + "]"), mod);
    }
    return interpolate(ValueTable(p, n, depth, std::move(residues)));
  }
  MonomialRep poly(p, n);
  if (doc.contains("alpha")) {
    const Json& a = doc["alpha"];
    const int depth = get_small(field(a, "depth", where + ".alpha"), where + ".alpha.depth", 0, 16);
    const std::int64_t res = get_int(field(a, "residue", where + ".alpha"), where + ".alpha.residue");
    poly.set_alpha(TorusValue(p, depth, mod_floor(res, checked_pow(p, depth + 1))));
  }
  const Json& terms = get_array(doc, "terms", where, 0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = where + ".terms[" + std::to_string(i) + "]";
    Monomial m;
    const Json& exps = get_array(terms[i], "exps", w, static_cast<std::size_t>(n));
    int total = 0;
    for (std::size_t j = 0; j < exps.size(); ++j) {
      m.exps.push_back(get_small(exps[j], w + ".exps[" + std::to_string(j) + "]", 0, p - 1));
      total += m.exps.back();
    }
    if (total == 0) fail(w + ".exps", "a term needs a positive total degree; use alpha for constants");
    m.depth = terms[i].contains("depth") ? get_small(terms[i]["depth"], w + ".depth", 0, 16) : 0;
    const int coef = static_cast<int>(mod_floor(get_int(field(terms[i], "coef", w), w + ".coef"), p));
    if (poly.coefficient(m) != 0) fail(w, "duplicate monomial");
    poly.set_term(m, coef);
  }
  return poly;
}

DegreeDepth parse_type(const std::string& text) {
  int d = 0;
  int k = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> d >> comma >> k) || comma != ',' || !in.eof()) {
    throw InputError("type \"" + text + "\": expected \"degree,depth\"");
  }
  return {d, k};
}

Json to_json(const Coloring& f) {
  Json j;
  j["p"] = f.p();
  j["n"] = f.dim();
  j["colors"] = f.colors().labels();
  if (f.colors().has_action()) j["action"] = f.colors().action();
  j["values"] = f.values();
  return j;
}

Json to_json(const MonomialRep& poly) {
  Json j;
  j["p"] = poly.p();
  j["n"] = poly.dim();
  j["alpha"] = {{"depth", poly.alpha().depth()}, {"residue", poly.alpha().residue()}};
  Json terms = Json::array();
  for (const auto& [m, c] : poly.terms()) terms.push_back({{"exps", m.exps}, {"depth", m.depth}, {"coef", c}});
  j["terms"] = std::move(terms);
  j["text"] = to_string(poly);
  return j;
}

Json to_json(const ParameterList& params) {
  Json j = Json::array();
  for (const auto& [dk, count] : params.counts()) j.push_back({{"degree", dk.degree}, {"depth", dk.depth}, {"count", count}});
  return j;
}

Json to_json(const PolynomialFactor& factor) {
  Json polys = Json::array();
  for (const auto& h : factor.polys()) {
    polys.push_back({{"degree", h.type.degree}, {"depth", h.type.depth}, {"poly", to_string(h.poly)}});
  }
  return {{"params", to_json(factor.params())}, {"norm", factor.params().norm()}, {"polys", std::move(polys)}};
}

Json to_json(const Subspace& u) { return {{"basis", u.basis}, {"base", u.base}}; }

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json round_floats(const Json& j, int digits) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return j;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& e : j) out.push_back(round_floats(e, digits));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_floats(it.value(), digits);
    return out;
  }
  return j;
}

}  // namespace hofa::cli
