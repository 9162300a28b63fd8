#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hofa/hofa.hpp"
#include "hofa/suite/acceptance.hpp"
#include "json_io.hpp"

#ifndef HOFA_VERSION
#define HOFA_VERSION "0.0.0"
#endif

namespace hofa::cli {

namespace {

/// Flags shared by every subcommand, plus the ones a subcommand adds.
struct Options {
  std::string in;
  std::string out;
  std::string mode = "exact";
  std::uint64_t samples = 10000;
  std::optional<std::uint64_t> seed;
  int d = 2;
  double eta = 0.1;
  double theta = 0.2;
  double zeta = 0.5;
  std::optional<std::uint64_t> cap;
  std::string format = "json";

  // Subcommand-specific.
  std::optional<int> color;
  std::string pattern;
  bool generic = false;
  std::size_t max_witnesses = 8;
  std::vector<std::string> types;
  int n_cap = 0;
  bool slack = false;
  bool full_dimensional = false;
  std::size_t max_elements = 4096;
  std::optional<int> rank_d;
  std::string engine = "regularity";
  int c0 = 1;
  std::optional<int> d_high;
  std::optional<std::uint64_t> switch_norm;
  std::string family;
  double epsilon = 0.5;
  std::optional<double> threshold;
  std::uint64_t xi_budget = 4096;
  std::string property;
  std::uint64_t trials = 1000;
  bool affine = false;
  std::vector<int> criteria;
};

/// Input digests gathered while a subcommand reads its files.
struct Inputs {
  Json digests = Json::object();

  InputFile read(const std::string& path) {
    if (path.empty()) throw InputError("an input file is required (--in)");
    InputFile f = read_input(path);
    digests[path] = fnv1a_hex(f.bytes);
    return f;
  }
};

struct Outcome {
  Json report;
  /// Set for CSV trace output.
  std::optional<std::string> csv;
};

bool sampled(const Options& o) {
  if (o.mode == "exact") return false;
  if (o.mode == "sampled") return true;
  throw InvalidParameter("--mode must be exact or sampled");
}

EvalMode eval_mode(const Options& o, std::uint64_t seed) {
  return EvalMode{!sampled(o), o.samples, seed};
}

Json interval(double lo, double hi) { return Json::array({lo, hi}); }

Outcome cmd_gowers(const Options& o, Inputs& inputs, std::uint64_t seed) {
  const InputFile f = inputs.read(o.in);
  const ComplexFn fn = parse_function(f.doc, f.path, o.color);
  const GowersResult r = gowers_norm(fn, o.d, eval_mode(o, seed));
  Json rep{{"d", o.d}, {"value", r.value}, {"power", to_json(r.power)}, {"exact", r.exact}};
  if (!r.exact) {
    rep["ci"] = interval(r.ci_low, r.ci_high);
    rep["samples"] = r.samples;
  }
  return {rep, {}};
}

Outcome cmd_density(const Options& o, Inputs& inputs, std::uint64_t seed) {
  const InputFile f = inputs.read(o.in);
  const Coloring g = parse_coloring(f.doc, f.path);
  const InputFile pf = inputs.read(o.pattern);
  const ColoredPattern h = parse_pattern(pf.doc, g.colors(), g.p(), pf.path);
  const PatternDensity r = pattern_density(g, h, o.generic, eval_mode(o, seed), o.max_witnesses);
  Json rep{{"generic_only", o.generic}, {"count", r.count},   {"total", r.total},
           {"density", r.density},      {"exact", r.exact},   {"witnesses", r.witnesses}};
  if (!r.exact) rep["ci"] = interval(r.ci_low, r.ci_high);
  return {rep, {}};
}

Outcome cmd_complexity(const Options& o, Inputs& inputs, std::uint64_t) {
  const InputFile f = inputs.read(o.in);
  const LinearSystem s = parse_system(f.doc, f.path);
  const Classification c = classify(s);
  Json rep{{"forms", s.size()},
           {"vars", s.vars},
           {"finite_complexity", c.finite_complexity},
           {"translation_invariant", c.translation_invariant},
           {"cap_hit", c.cap_hit}};
  rep["complexity"] = c.complexity ? Json(*c.complexity) : Json(nullptr);
  return {rep, {}};
}

Outcome cmd_consistency(const Options& o, Inputs& inputs, std::uint64_t) {
  const InputFile f = inputs.read(o.in);
  const LinearSystem s = parse_system(f.doc, f.path);
  if (o.types.empty()) throw InvalidParameter("at least one --type degree,depth is required");
  ConsistencyOptions opts{o.n_cap, o.slack ? WitnessMode::slack : WitnessMode::strict};
  std::vector<DegreeDepth> types;
  Json sets = Json::array();
  for (const auto& t : o.types) {
    const DegreeDepth dk = parse_type(t);
    if (!in_domain(s.p, dk)) throw InvalidParameter("type " + to_string(dk) + " is not admissible for p");
    types.push_back(dk);
    const ConsistencySet c = consistency_set(dk, s, opts);
    Json entry{{"type", to_string(dk)},
               {"size", c.size()},
               {"stabilized", c.stabilized},
               {"per_n_sizes", c.per_n_sizes},
               {"per_n_raw_sizes", c.per_n_raw_sizes}};
    if (c.size() <= o.max_elements) entry["elements"] = c.elements;
    sets.push_back(std::move(entry));
  }
  Json rep{{"sets", std::move(sets)}};
  if (o.full_dimensional) {
    const FullDimensionalReport r = is_full_dimensional(s, types, opts);
    rep["full_dimensional"] = {{"value", r.full_dimensional},
                               {"conclusive", r.conclusive},
                               {"system_sizes", r.system_sizes},
                               {"full_sizes", r.full_sizes}};
  }
  return {rep, {}};
}

Json rank_json(const RankEstimate& r) {
  Json j{{"infinite", r.infinite}, {"bias", r.bias}, {"exact", r.exact}};
  j["rank"] = r.infinite ? Json(nullptr) : Json(r.value);
  if (!r.exact) j["ci"] = interval(r.ci_low, r.ci_high);
  return j;
}

Outcome cmd_rank(const Options& o, Inputs& inputs, std::uint64_t seed) {
  const InputFile f = inputs.read(o.in);
  if (f.doc.is_object() && f.doc.contains("polys")) {
    const Json& list = f.doc["polys"];
    if (!list.is_array()) throw InputError(f.path + ".polys: expected a list of polynomials");
    std::vector<HomogeneousPoly> polys;
    int p = 2;
    int n = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string w = f.path + ".polys[" + std::to_string(i) + "]";
      const MonomialRep poly = parse_poly(list[i], w);
      const auto h = certify_homogeneous(poly);
      if (!h) throw InputError(w + ": polynomial is not homogeneous");
      if (i > 0 && (poly.p() != p || poly.dim() != n)) throw InputError(w + ": polynomials live on different spaces");
      p = poly.p();
      n = poly.dim();
      polys.push_back(*h);
    }
    const PolynomialFactor factor(p, n, polys);
    const FactorRank r = factor_rank(factor, o.samples, seed);
    Json rep{{"factor", to_json(factor)},
             {"infinite", r.infinite},
             {"argmin", r.argmin},
             {"combinations_tested", r.combinations_tested},
             {"exhaustive", r.exhaustive}};
    rep["min_rank"] = r.infinite ? Json(nullptr) : Json(r.min_rank);
    return {rep, {}};
  }
  const MonomialRep poly = parse_poly(f.doc, f.path);
  const DegreeDepth dk = poly.degree_depth();
  const int d = o.rank_d.value_or(std::max(dk.degree, 1));
  Json rep = rank_json(analytic_rank(poly.table(), d, eval_mode(o, seed)));
  rep["d"] = d;
  rep["poly"] = to_string(poly);
  return {rep, {}};
}

std::vector<ComplexFn> regularity_inputs(const InputFile& f) {
  const Json& doc = f.doc;
  if (doc.is_object() && doc.contains("colors")) {
    const Coloring g = parse_coloring(doc, f.path);
    std::vector<ComplexFn> fs;
    for (int c = 0; c < g.colors().size(); ++c) fs.push_back(g.indicator(c));
    return fs;
  }
  return {parse_function(doc, f.path)};
}

Json trace_json(const std::vector<TraceRow>& trace) {
  Json rows = Json::array();
  for (const auto& r : trace) {
    rows.push_back({{"round", r.round},
                    {"degree_used", r.degree_used},
                    {"factor_norm", r.factor_norm},
                    {"factor_degree", r.factor_degree},
                    {"energy", r.energy},
                    {"psr_norm", r.psr_norm}});
  }
  return rows;
}

Outcome cmd_regularize(const Options& o, Inputs& inputs, std::uint64_t seed) {
  const InputFile f = inputs.read(o.in);
  const std::vector<ComplexFn> fs = regularity_inputs(f);
  const int p = fs[0].p();
  const int n = fs[0].dim();
  RegularityOptions opts;
  opts.oracle.seed = seed;
  Json rep{{"engine", o.engine}, {"functions", fs.size()}};
  std::vector<TraceRow> trace;
  if (o.engine == "weak") {
    const WeakRegularityResult r = weak_regularity(fs, PolynomialFactor(p, n), o.d, o.eta, opts);
    rep["factor"] = to_json(r.factor);
    rep["psr_norms"] = r.psr_norms;
    rep["correlations"] = r.correlations;
    rep["gains"] = r.gains;
    rep["iterations"] = r.iterations;
    rep["converged"] = r.converged;
    rep["oracle_failed"] = r.oracle_failed;
    trace = r.trace;
  } else if (o.engine == "regularity") {
    const double eta = o.eta;
    const RegularityResult r =
        regularity(fs, PolynomialFactor(p, n), o.d, o.theta, [eta](std::uint64_t) { return eta; }, opts);
    rep["factor"] = to_json(r.factor);
    rep["next"] = to_json(r.next);
    rep["psr_norms"] = r.psr_norms;
    rep["sml_norms"] = r.sml_norms;
    rep["rounds"] = r.rounds;
    rep["converged"] = r.converged;
    trace = r.trace;
  } else if (o.engine == "strong") {
    const std::uint64_t threshold =
        o.switch_norm.value_or(saturating_pow(static_cast<std::uint64_t>(p), static_cast<unsigned>(o.c0)));
    GrowthConfig config = step_schedule(o.eta, o.theta, o.d, o.d_high.value_or(o.d + 1), threshold, o.zeta, o.c0);
    config.seed = seed;
    config.options = opts;
    const StrongRegularityResult r = strong_regularity(fs, config);
    rep["base"] = to_json(r.base);
    rep["factor"] = to_json(r.factor);
    rep["refined"] = to_json(r.refined);
    rep["degrees_used"] = r.degrees_used;
    rep["psr_degree"] = r.psr_degree;
    rep["psr_norms"] = r.psr_norms;
    rep["sml_norms"] = r.sml_norms;
    rep["eta_bound"] = r.eta_bound;
    rep["theta_bound"] = r.theta_bound;
    rep["psr_ok"] = r.psr_ok;
    rep["ranges_ok"] = r.ranges_ok;
    rep["reconstruction_ok"] = r.reconstruction_ok;
    rep["selector"] = {{"attempts", r.selector_attempts},
                       {"ok", r.selector_check.ok()},
                       {"small_norm_violations", r.selector_check.small_norm_violations},
                       {"bad_fraction", r.selector_check.bad_fraction}};
    rep["rounds"] = r.rounds;
    rep["converged"] = r.converged;
    trace = r.trace;
  } else {
    throw InvalidParameter("--engine must be weak, regularity or strong");
  }
  rep["trace"] = trace_json(trace);
  Outcome out{rep, {}};
  if (o.format == "csv") out.csv = trace_csv(trace);
  return out;
}

Outcome cmd_decompose(const Options& o, Inputs& inputs, std::uint64_t) {
  const InputFile f = inputs.read(o.in);
  const MonomialRep poly = parse_poly(f.doc, f.path);
  Json parts = Json::array();
  for (const auto& h : homogeneous_decomposition(poly)) {
    Json part = to_json(h.poly);
    part["degree"] = h.type.degree;
    part["depth"] = h.type.depth;
    parts.push_back(std::move(part));
  }
  const DegreeDepth dk = poly.degree_depth();
  return {Json{{"poly", to_string(poly)},
               {"degree", dk.degree},
               {"depth", dk.depth},
               {"homogeneous", is_homogeneous(poly)},
               {"parts", std::move(parts)}},
          {}};
}

Json recolor_report_json(const RecolorReport& r) {
  Json j{{"distance", r.distance},
         {"cleanup_fraction", r.cleanup_fraction},
         {"irregular_fraction", r.irregular_fraction},
         {"residual_before", r.residual_before},
         {"residual_after", r.residual_after},
         {"threshold", r.threshold},
         {"linear_forms", r.linear_forms},
         {"xi_tried", r.xi_tried},
         {"unchanged", r.unchanged}};
  if (r.regularity) {
    j["factor"] = to_json(r.regularity->factor);
    j["refined"] = to_json(r.regularity->refined);
  }
  return j;
}

Outcome cmd_recolor(const Options& o, Inputs& inputs, std::uint64_t seed, const CLI::App& sub) {
  const InputFile f = inputs.read(o.in);
  const Coloring g = parse_coloring(f.doc, f.path);
  const InputFile ff = inputs.read(o.family);
  const std::vector<ColoredPattern> family = parse_family(ff.doc, g.colors(), g.p(), ff.path);
  RecolorParams params;
  params.epsilon = o.epsilon;
  params.threshold = o.threshold;
  params.seed = seed;
  params.xi_budget = o.xi_budget;
  const bool custom = sub.count("--eta") + sub.count("--theta") + sub.count("--zeta") + sub.count("--c0") > 0;
  if (custom) {
    // Unset growth flags keep the values of the default schedule.
    int c0 = 1;
    while (std::pow(g.p(), c0) < 2.0 / o.epsilon && c0 < 62) ++c0;
    if (sub.count("--c0") > 0) c0 = o.c0;
    const double eta = sub.count("--eta") > 0 ? o.eta : 0.1;
    const double theta = sub.count("--theta") > 0 ? o.theta : 0.5;
    const double zeta = sub.count("--zeta") > 0 ? o.zeta : 0.5;
    params.growth = step_schedule(eta, theta, 1, 2,
                                  saturating_pow(static_cast<std::uint64_t>(g.p()), static_cast<unsigned>(c0)), zeta, c0);
  }
  const RecolorResult r = removal_recolor(g, family, params);
  return {Json{{"recoloring", recolor_report_json(r.report)},
               {"projective_in", g.is_projective()},
               {"projective_out", r.g.is_projective()},
               {"g", to_json(r.g)}},
          {}};
}

Property parse_property(const std::string& spec, const Coloring& g, Inputs& inputs) {
  if (spec == "linearity") return Property::linearity(g.p());
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "degree" && !arg.empty()) return Property::classical_degree(g.p(), std::stoi(arg));
  if ((kind == "allowable" || kind == "family") && !arg.empty()) {
    const InputFile f = inputs.read(arg);
    const Json& tables = f.doc.is_object() && f.doc.contains("tables") ? f.doc["tables"] : f.doc;
    if (!tables.is_array()) throw InputError(f.path + ": expected a list of tables");
    std::map<int, std::vector<Coloring>> by_dim;
    std::vector<Coloring> all;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      Json t = tables[i];
      if (t.is_object()) {
        if (!t.contains("p")) t["p"] = g.p();
        if (!t.contains("colors")) t["colors"] = g.colors().labels();
      }
      Coloring c = parse_coloring(t, f.path + "[" + std::to_string(i) + "]");
      if (!(c.colors() == g.colors())) {
        c = Coloring(c.p(), c.dim(), g.colors(), c.values());
      }
      by_dim[c.dim()].push_back(c);
      all.push_back(std::move(c));
    }
    if (kind == "allowable") return Property::allowable_2dim(g.p(), g.colors(), all);
    return Property::forbidden_family(g.p(), g.colors(), std::move(by_dim));
  }
  throw InvalidParameter("--property must be linearity, degree:<t>, allowable:<file> or family:<file>");
}

Outcome cmd_test(const Options& o, Inputs& inputs, std::uint64_t seed) {
  const InputFile f = inputs.read(o.in);
  const Coloring g = parse_coloring(f.doc, f.path);
  const Property prop = parse_property(o.property, g, inputs);
  const SubspaceMode sub_mode = o.affine ? SubspaceMode::affine : SubspaceMode::linear;
  Json rep{{"property", prop.name()}, {"d", o.d}, {"subspaces", to_string(sub_mode)}};
  if (!sampled(o)) {
    rep["rate"] = exact_rejection_probability(g, prop, o.d, sub_mode);
    rep["exact"] = true;
    return {rep, {}};
  }
  TesterConfig config;
  config.d = o.d;
  config.trials = o.trials;
  config.seed = seed;
  config.mode = sub_mode;
  config.max_witnesses = o.max_witnesses;
  const TestReport r = run_tester(g, prop, config);
  rep["exact"] = false;
  rep["trials"] = r.trials;
  rep["accepts"] = r.accepts;
  rep["rejects"] = r.rejects;
  rep["rate"] = r.rate;
  rep["ci"] = interval(r.ci_low, r.ci_high);
  Json w = Json::array();
  for (const auto& u : r.witnesses) w.push_back(to_json(u));
  rep["witnesses"] = std::move(w);
  return {rep, {}};
}

Outcome cmd_selftest(const Options& o, std::ostream& err) {
  std::vector<int> ids = o.criteria;
  if (ids.empty()) {
    for (int i = 1; i <= acceptance::criterion_count; ++i) ids.push_back(i);
  }
  Json list = Json::array();
  bool all = true;
  for (int id : ids) {
    const acceptance::CriterionResult r = acceptance::run_criterion(id);
    err << acceptance::format(r) << '\n';
    all = all && r.pass;
    list.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  return {Json{{"passed", all}, {"criteria", std::move(list)}}, {}};
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Effective option values of a parsed subcommand, omitting --out.
Json parameters_of(const CLI::App& sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help" || name == "--out") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_expected_max() == 0) {
        params[name] = true;
      } else if (res.size() == 1) {
        params[name] = res[0];
      } else {
        params[name] = res;
      }
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hofa-lab: higher-order Fourier analysis and property-testing laboratory"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s, bool with_in = true) {
    if (with_in) s->add_option("--in", o.in, "Input JSON file")->required();
    s->add_option("--out", o.out, "Write the report here instead of stdout");
    s->add_option("--mode", o.mode, "exact or sampled")->capture_default_str();
    s->add_option("--samples", o.samples, "Sample count in sampled mode")->capture_default_str();
    s->add_option("--seed", o.seed, "Seed for randomized work; generated and printed when absent");
    s->add_option("--cap", o.cap, "Enumeration cap (overrides HOFA_CAP)");
    s->add_option("--format", o.format, "json or csv")->capture_default_str();
  };
  struct Sub {
    CLI::App* app;
    bool randomized_always;
  };
  std::map<std::string, Sub> subs;
  auto add = [&](const std::string& name, const std::string& help, bool randomized) {
    CLI::App* s = app.add_subcommand(name, help);
    subs[name] = Sub{s, randomized};
    return s;
  };

  CLI::App* s = add("gowers", "Gowers uniformity norm of a function table", false);
  common(s);
  s->add_option("--d", o.d, "Norm order U^d")->capture_default_str();
  s->add_option("--color", o.color, "Read a coloring as the indicator of this color");

  s = add("density", "Density of a colored pattern in a coloring", false);
  common(s);
  s->add_option("--pattern", o.pattern, "Pattern JSON file")->required();
  s->add_flag("--generic", o.generic, "Count only generic instances");
  s->add_option("--max-witnesses", o.max_witnesses)->capture_default_str();

  s = add("complexity", "Classify a system of linear forms", false);
  common(s);

  s = add("consistency", "Consistency sets of a linear system", false);
  common(s);
  s->add_option("--type", o.types, "Degree and depth as d,k; repeatable");
  s->add_option("--n-cap", o.n_cap, "Largest witness dimension; 0 selects ell + 1")->capture_default_str();
  s->add_flag("--slack", o.slack, "Admit constant witnesses");
  s->add_flag("--full-dimensional", o.full_dimensional, "Compare with the full system L^ell");
  s->add_option("--max-elements", o.max_elements, "Largest set listed in full")->capture_default_str();

  s = add("rank", "Analytic rank of a polynomial, or rank of a factor given as {\"polys\": [...]}", false);
  common(s);
  s->add_option("--d", o.rank_d, "Derivative order; defaults to the degree");

  s = add("regularize", "Weak, iterated or strong polynomial regularity", true);
  common(s);
  s->add_option("--engine", o.engine, "weak, regularity or strong")->capture_default_str();
  s->add_option("--d", o.d, "Uniformity degree")->capture_default_str();
  s->add_option("--eta", o.eta)->capture_default_str();
  s->add_option("--theta", o.theta)->capture_default_str();
  s->add_option("--zeta", o.zeta)->capture_default_str();
  s->add_option("--c0", o.c0)->capture_default_str();
  s->add_option("--d-high", o.d_high, "Degree used once the factor norm passes --switch-norm");
  s->add_option("--switch-norm", o.switch_norm, "Factor norm at which the degree steps up");

  s = add("decompose", "Homogeneous decomposition of a polynomial", false);
  common(s);

  s = add("recolor", "Removal recoloring against a forbidden family", true);
  common(s);
  s->add_option("--family", o.family, "Family JSON file")->required();
  s->add_option("--epsilon", o.epsilon)->capture_default_str();
  s->add_option("--threshold", o.threshold, "High-density threshold");
  s->add_option("--xi-budget", o.xi_budget)->capture_default_str();
  s->add_option("--eta", o.eta);
  s->add_option("--theta", o.theta);
  s->add_option("--zeta", o.zeta);
  s->add_option("--c0", o.c0);

  s = add("test", "Run the subspace tester for a property", false);
  common(s);
  s->add_option("--property", o.property, "linearity, degree:<t>, allowable:<file> or family:<file>")->required();
  s->add_option("--d", o.d, "Subspace dimension")->capture_default_str();
  s->add_option("--trials", o.trials, "Trials in sampled mode")->capture_default_str();
  s->add_flag("--affine", o.affine, "Sample affine subspaces");
  s->add_option("--max-witnesses", o.max_witnesses)->capture_default_str();

  s = add("selftest", "Run the acceptance suite", false);
  common(s, false);
  s->add_option("--criteria", o.criteria, "Criterion ids to run; all by default");

  // The test subcommand samples by default.
  subs.at("test").app->get_option("--mode")->default_str("sampled");
  o.mode = "";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_domain_error;
  }

  std::string name;
  const Sub* active = nullptr;
  for (const auto& [n, sub] : subs) {
    if (sub.app->parsed()) {
      name = n;
      active = &sub;
    }
  }
  if (o.mode.empty()) o.mode = name == "test" ? "sampled" : "exact";

  try {
    if (o.format != "json" && o.format != "csv") throw InvalidParameter("--format must be json or csv");
    if (o.format == "csv" && name != "regularize") throw InvalidParameter("CSV output is only available for regularize");
    if (o.cap) set_enumeration_cap(*o.cap);
    const bool randomized = active->randomized_always || (name != "selftest" && sampled(o));
    std::optional<std::uint64_t> seed;
    if (randomized) {
      if (!o.seed) {
        o.seed = fresh_seed();
        err << "seed: " << *o.seed << '\n';
      }
      seed = o.seed;
    }
    const std::uint64_t s0 = seed.value_or(0);

    Inputs inputs;
    Outcome outcome;
    if (name == "gowers") outcome = cmd_gowers(o, inputs, s0);
    else if (name == "density") outcome = cmd_density(o, inputs, s0);
    else if (name == "complexity") outcome = cmd_complexity(o, inputs, s0);
    else if (name == "consistency") outcome = cmd_consistency(o, inputs, s0);
    else if (name == "rank") outcome = cmd_rank(o, inputs, s0);
    else if (name == "regularize") outcome = cmd_regularize(o, inputs, s0);
    else if (name == "decompose") outcome = cmd_decompose(o, inputs, s0);
    else if (name == "recolor") outcome = cmd_recolor(o, inputs, s0, *active->app);
    else if (name == "test") outcome = cmd_test(o, inputs, s0);
    else outcome = cmd_selftest(o, err);

    Json params = parameters_of(*active->app);
    if (params.contains("--mode")) params["--mode"] = o.mode;
    Json manifest{{"subcommand", name},
                  {"parameters", std::move(params)},
                  {"seed", seed ? Json(*seed) : Json(nullptr)},
                  {"tool_version", HOFA_VERSION},
                  {"input_digests", inputs.digests}};

    std::string text;
    if (outcome.csv) {
      text = "# manifest: " + manifest.dump() + "\n" + *outcome.csv;
    } else {
      text = round_floats(Json{{"manifest", manifest}, {"report", outcome.report}}).dump(2) + "\n";
    }
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw InputError(o.out + ": cannot open for writing");
      file << text;
    }
    if (name == "selftest" && !outcome.report.at("passed").get<bool>()) return exit_domain_error;
    return exit_ok;
  } catch (const CapExceeded& e) {
    err << "hofa-lab " << name << ": cap exceeded: " << e.what() << '\n';
    return exit_cap_exceeded;
  } catch (const InputError& e) {
    err << "hofa-lab " << name << ": input error: " << e.what() << '\n';
    return exit_domain_error;
  } catch (const Error& e) {
    err << "hofa-lab " << name << ": " << e.what() << '\n';
    return exit_domain_error;
  } catch (const std::invalid_argument& e) {
    err << "hofa-lab " << name << ": invalid argument: " << e.what() << '\n';
    return exit_domain_error;
  } catch (const std::out_of_range& e) {
    err << "hofa-lab " << name << ": value out of range: " << e.what() << '\n';
    return exit_domain_error;
  }
}

}  // namespace hofa::cli
