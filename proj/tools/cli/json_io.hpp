#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hofa/hofa.hpp"
#include "json.hpp"

namespace hofa::cli {

using Json = nlohmann::ordered_json;

/// A malformed input file; the message names the file and the line or field.
class InputError : public Error {
 public:
  using Error::Error;
};

struct InputFile {
  std::string path;
  std::string bytes;
  Json doc;
};

/// Reads and parses a JSON file; syntax errors report the line and column.
InputFile read_input(const std::string& path);

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Color set from "colors" (a count or a list of labels) and an optional
/// "action" table with action[b-1][c] = b . c.
ColorSet parse_colors(const Json& doc, int p, const std::string& where);

/// {"p", "n", "colors", "values"}: values are color indices or labels, one per
/// point, x_1 least significant.
Coloring parse_coloring(const Json& doc, const std::string& where);

/// {"p", "n", "values"} of reals or {"p", "n", "complex"} of [re, im] pairs.
/// When `color` is set, a coloring file is read as the indicator of that color.
ComplexFn parse_function(const Json& doc, const std::string& where, std::optional<int> color = std::nullopt);

/// {"p", "vars", "rows"} or {"p", "canonical": ell, "kind": "full"|"projective"}.
/// A missing "p" falls back to default_p when given.
LinearSystem parse_system(const Json& doc, const std::string& where, std::optional<int> default_p = std::nullopt);

/// {"system", "psi"}; psi entries are color indices or labels.
ColoredPattern parse_pattern(const Json& doc, const ColorSet& colors, int p, const std::string& where);

/// A list of patterns, or {"patterns": [...]}.
std::vector<ColoredPattern> parse_family(const Json& doc, const ColorSet& colors, int p, const std::string& where);

/// {"p", "n", "alpha": {"depth", "residue"}, "terms": [{"exps", "depth", "coef"}]}
/// or a value table {"p", "n", "depth", "residues"}.
MonomialRep parse_poly(const Json& doc, const std::string& where);

/// "d,k".
DegreeDepth parse_type(const std::string& text);

Json to_json(const Coloring& f);
Json to_json(const MonomialRep& poly);
Json to_json(const ParameterList& params);
Json to_json(const PolynomialFactor& factor);
Json to_json(const Subspace& u);
Json to_json(Complex z);

/// Rounds every floating value to `digits` significant digits so reruns
/// render byte-identical text.
Json round_floats(const Json& j, int digits = 12);

}  // namespace hofa::cli
