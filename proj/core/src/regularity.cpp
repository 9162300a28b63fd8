#include "hofa/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "hofa/caps.hpp"
#include "hofa/rng.hpp"

namespace hofa {

DecompositionCheck check_decomposition(const ComplexFn& f, const Decomposition& dec, double tol) {
  DecompositionCheck c;
  c.reconstruction_error = f.distance(dec.str + dec.psr + dec.sml);
  c.ranges_ok = dec.str.in_range(0.0, 1.0, tol) && (dec.str + dec.sml).in_range(0.0, 1.0, tol) &&
                dec.psr.in_range(-1.0, 1.0, tol) && dec.sml.in_range(-1.0, 1.0, tol);
  return c;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(12);
  out << "round,degree_used,factor_norm,factor_degree,energy_per_function,psr_norm_per_function\n";
  auto join = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ";" : "") << v[i];
  };
  for (const auto& row : trace) {
    out << row.round << ',' << row.degree_used << ',' << row.factor_norm << ',' << row.factor_degree << ',';
    join(row.energy);
    out << ',';
    join(row.psr_norm);
    out << '\n';
  }
  return out.str();
}

namespace {

void require_unit_interval(std::span<const ComplexFn> fs, const PolynomialFactor& base) {
  if (fs.empty()) throw InvalidParameter("at least one function is required");
  for (const auto& f : fs) {
    if (f.p() != base.p() || f.dim() != base.dim()) throw ShapeError("function and factor live on different spaces");
    if (!f.in_range(0.0, 1.0)) throw InvalidParameter("regularity inputs must take values in [0,1]");
  }
}

std::vector<double> energies(std::span<const ComplexFn> fs, const PolynomialFactor& factor) {
  std::vector<double> e;
  for (const auto& f : fs) e.push_back(energy(f, factor));
  return e;
}

TraceRow make_row(int round, int degree, const PolynomialFactor& factor, std::vector<double> energy,
                  std::vector<double> psr) {
  return TraceRow{round, degree, factor.params().norm(), factor.params().degree(), std::move(energy), std::move(psr)};
}

}  // namespace

WeakRegularityResult weak_regularity(std::span<const ComplexFn> fs, const PolynomialFactor& base, int d, double eta,
                                     const RegularityOptions& options) {
  require_unit_interval(fs, base);
  if (d < 1) throw InvalidParameter("weak regularity needs d >= 1");
  if (!(eta > 0.0)) throw InvalidParameter("eta must be positive");
  WeakRegularityResult out;
  PolynomialFactor factor = base;
  while (true) {
    std::vector<Decomposition> parts;
    std::vector<double> norms;
    for (const auto& f : fs) {
      ComplexFn str = conditional_expectation(f, factor);
      ComplexFn psr = f - str;
      norms.push_back(gowers_norm(psr, d + 1, options.norm_mode).value);
      parts.push_back(Decomposition{std::move(str), std::move(psr), ComplexFn(f.p(), f.dim())});
    }
    out.trace.push_back(make_row(out.iterations, d, factor, energies(fs, factor), norms));
    out.parts = std::move(parts);
    out.psr_norms = norms;
    out.factor = factor;

    const auto worst = std::max_element(norms.begin(), norms.end());
    if (*worst < eta) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= options.max_iterations) return out;

    const auto l = static_cast<std::size_t>(worst - norms.begin());
    const auto witness = inverse_oracle(out.parts[l].psr, d, options.oracle);
    if (!witness) {
      out.oracle_failed = true;
      return out;
    }
    const MonomialRep polys[] = {witness->poly};
    PolynomialFactor next = factor.refine(polys);
    if (next.polys().size() == factor.polys().size()) {
      out.oracle_failed = true;
      return out;
    }
    out.correlations.push_back(witness->correlation);
    out.gains.push_back(energy(fs[l], next) - energy(fs[l], factor));
    factor = std::move(next);
    ++out.iterations;
  }
}

RegularityResult regularity(std::span<const ComplexFn> fs, const PolynomialFactor& base, int d, double theta,
                            const std::function<double(std::uint64_t)>& eta, const RegularityOptions& options) {
  require_unit_interval(fs, base);
  if (!(theta > 0.0)) throw InvalidParameter("theta must be positive");
  RegularityResult out;
  std::vector<PolynomialFactor> chain{base};
  std::vector<std::vector<double>> energy_chain{energies(fs, base)};
  bool ok = true;
  int i = 0;
  while (true) {
    if (i >= 1) {
      bool small = true;
      for (std::size_t l = 0; l < fs.size(); ++l) small = small && energy_chain[i][l] - energy_chain[i - 1][l] < theta * theta;
      if (small) {
        out.converged = ok;
        break;
      }
    }
    if (i >= options.max_rounds) break;
    const std::uint64_t norm = chain[i].params().norm();
    WeakRegularityResult weak = weak_regularity(fs, chain[i], d, eta(norm), options);
    ok = ok && weak.converged;
    out.trace.push_back(make_row(i, d, chain[i], energy_chain[i], weak.psr_norms));
    chain.push_back(weak.factor);
    energy_chain.push_back(energies(fs, weak.factor));
    ++i;
  }
  const int m = std::max(i, 1);
  if (static_cast<int>(chain.size()) <= m) {
    // max_rounds == 0: no refinement happened.
    chain.push_back(chain.back());
  }
  out.rounds = i;
  out.factor = chain[m - 1];
  out.next = chain[m];
  for (const auto& f : fs) {
    ComplexFn str = conditional_expectation(f, out.factor);
    ComplexFn next = conditional_expectation(f, out.next);
    ComplexFn psr = f - next;
    ComplexFn sml = next - str;
    out.psr_norms.push_back(gowers_norm(psr, d + 1, options.norm_mode).value);
    out.sml_norms.push_back(sml.l2_norm());
    out.parts.push_back(Decomposition{std::move(str), std::move(psr), std::move(sml)});
  }
  return out;
}

GrowthConfig step_schedule(double eta, double theta, int low, int high, std::uint64_t threshold, double zeta,
                           int c0) {
  GrowthConfig c;
  c.eta = [eta](int, std::uint64_t) { return eta; };
  c.theta = [theta](int, std::uint64_t) { return theta; };
  c.degree = [low, high, threshold](int, std::uint64_t n) { return n <= threshold ? low : high; };
  c.zeta = zeta;
  c.c0 = c0;
  return c;
}

bool check_monotone(const GrowthConfig& config, int max_degree, std::uint64_t max_norm) {
  std::vector<std::uint64_t> norms;
  for (std::uint64_t n = 1; n <= max_norm; n *= 2) norms.push_back(n);
  for (int d = 1; d <= max_degree; ++d) {
    for (std::size_t i = 0; i < norms.size(); ++i) {
      for (int d2 = d; d2 <= max_degree; ++d2) {
        for (std::size_t j = i; j < norms.size(); ++j) {
          if (config.eta && config.eta(d2, norms[j]) > config.eta(d, norms[i])) return false;
          if (config.theta && config.theta(d2, norms[j]) > config.theta(d, norms[i])) return false;
          if (config.degree && config.degree(d2, norms[j]) < config.degree(d, norms[i])) return false;
          if (config.rank && config.rank(d2, norms[j]) < config.rank(d, norms[i])) return false;
        }
      }
    }
  }
  return true;
}

SelectorCheck check_selector(const SubatomSelector& selector, std::span<const ComplexFn> fs,
                             const std::vector<Decomposition>& parts, const PolynomialFactor& factor,
                             const PolynomialFactor& refined, double theta, double zeta) {
  const ParameterList& I = factor.params();
  const ParameterList& J = refined.params();
  if (!(selector.source() == I) || !(selector.target() == J)) {
    throw ShapeError("selector parameters do not match the factors");
  }
  const std::size_t R = fs.size();
  struct Cell {
    std::uint64_t count = 0;
    std::vector<double> sum;
    std::vector<double> sml_sq;
  };
  std::unordered_map<std::uint64_t, Cell> atoms, subatoms;
  const auto& ranks = factor.atom_ranks();
  const auto& sub_ranks = refined.atom_ranks();
  for (Point x = 0; x < fs[0].size(); ++x) {
    Cell& a = atoms[ranks[x]];
    Cell& s = subatoms[sub_ranks[x]];
    if (a.sum.empty()) a.sum.assign(R, 0.0);
    if (s.sum.empty()) {
      s.sum.assign(R, 0.0);
      s.sml_sq.assign(R, 0.0);
    }
    ++a.count;
    ++s.count;
    for (std::size_t l = 0; l < R; ++l) {
      a.sum[l] += fs[l][x].real();
      s.sum[l] += fs[l][x].real();
      s.sml_sq[l] += std::norm(parts[l].sml[x]);
    }
  }

  SelectorCheck check;
  const std::uint64_t total = I.norm();
  require_within_cap(total, "subatom selector check");
  const int lin = I.count({1, 0});
  std::uint64_t bad = 0;
  for (std::uint64_t r = 0; r < total; ++r) {
    const auto ait = atoms.find(r);
    if (ait == atoms.end()) continue;
    const Atom a = atom_unrank(I, r);
    const std::uint64_t sr = atom_rank(J, selector.apply(a));
    const auto sit = subatoms.find(sr);
    bool linear_nonzero = false;
    for (int j = 0; j < lin; ++j) linear_nonzero = linear_nonzero || a.residues[j] != 0;
    if (sit == subatoms.end()) {
      ++bad;
      if (linear_nonzero) ++check.small_norm_violations;
      continue;
    }
    const Cell& A = ait->second;
    const Cell& S = sit->second;
    bool far = false;
    for (std::size_t l = 0; l < R; ++l) {
      if (linear_nonzero && !(S.sml_sq[l] < theta * theta * static_cast<double>(S.count))) {
        ++check.small_norm_violations;
      }
      const double diff = A.sum[l] / static_cast<double>(A.count) - S.sum[l] / static_cast<double>(S.count);
      far = far || !(std::abs(diff) < zeta);
    }
    if (far) ++bad;
  }
  check.bad_fraction = static_cast<double>(bad) / static_cast<double>(total);
  check.small_norm_ok = check.small_norm_violations == 0;
  check.approximation_ok = check.bad_fraction <= zeta;
  return check;
}

StrongRegularityResult strong_regularity(std::span<const ComplexFn> fs, const GrowthConfig& config) {
  if (fs.empty()) throw InvalidParameter("at least one function is required");
  if (!config.eta || !config.theta || !config.degree) throw InvalidParameter("eta, theta and d must be provided");
  if (!(config.zeta > 0.0 && config.zeta < 1.0)) throw InvalidParameter("zeta must lie in (0,1)");
  if (config.c0 < 1) throw InvalidParameter("c0 must be positive");
  const int p = fs[0].p();
  const int n = fs[0].dim();
  const int log_term = static_cast<int>(std::ceil(std::log(2.0 / config.zeta) / std::log(static_cast<double>(p)) - 1e-12));
  if (n < config.c0 + log_term) {
    throw InvalidParameter("dim V must be at least c0 + ceil(log_p(2/zeta)) = " + std::to_string(config.c0 + log_term));
  }
  const int n_reg = std::max(config.c0, log_term);

  std::vector<HomogeneousPoly> linear;
  for (int j = 0; j < n_reg; ++j) {
    MonomialRep rep(p, n);
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(j)] = 1;
    rep.set_term(Monomial{e, 0}, 1);
    linear.push_back(HomogeneousPoly{rep, {1, 0}});
  }
  StrongRegularityResult out;
  out.base = PolynomialFactor(p, n, linear);
  require_unit_interval(fs, out.base);

  const double R = static_cast<double>(fs.size());
  const double zeta4 = config.zeta / 4.0;
  auto theta_prime = [&](int D, std::uint64_t N) {
    return config.theta(D, N) / (2.0 * std::sqrt(R) * static_cast<double>(N));
  };

  std::vector<PolynomialFactor> chain{out.base};
  std::vector<std::vector<double>> energy_chain{energies(fs, out.base)};
  std::vector<RegularityResult> applications;
  bool ok = true;
  int i = 0;
  while (true) {
    if (i >= 1) {
      bool small = true;
      for (std::size_t l = 0; l < fs.size(); ++l) {
        small = small && energy_chain[i][l] - energy_chain[i - 1][l] < zeta4 * zeta4 * zeta4;
      }
      if (small) {
        out.converged = ok;
        break;
      }
    }
    if (i >= config.options.max_rounds) break;
    const int D = chain[i].params().degree();
    const std::uint64_t N = chain[i].params().norm();
    const int d = config.degree(D, N);
    auto eta_d = [&config, d](std::uint64_t norm) { return config.eta(d, norm); };
    RegularityResult reg = regularity(fs, chain[i], d, theta_prime(D, N), eta_d, config.options);
    ok = ok && reg.converged;
    out.degrees_used.push_back(d);
    out.trace.push_back(make_row(i, d, chain[i], energy_chain[i], reg.psr_norms));
    chain.push_back(reg.factor);
    energy_chain.push_back(energies(fs, reg.factor));
    applications.push_back(std::move(reg));
    ++i;
  }
  if (applications.empty()) throw InvalidParameter("max_rounds must be positive");
  const int m = i;
  out.rounds = m;
  out.factor = chain[m - 1];
  out.refined = chain[m];
  const RegularityResult& last = applications.back();
  out.parts = last.parts;
  out.psr_degree = out.degrees_used.back();
  out.psr_norms = last.psr_norms;
  out.sml_norms = last.sml_norms;

  const int Db = out.factor.params().degree();
  const std::uint64_t Nb = out.factor.params().norm();
  out.eta_bound = config.eta(out.refined.params().degree(), out.refined.params().norm());
  out.theta_bound = config.theta(Db, Nb);
  for (std::size_t l = 0; l < fs.size(); ++l) {
    out.psr_ok = out.psr_ok && out.psr_norms[l] < out.eta_bound;
    const DecompositionCheck dc = check_decomposition(fs[l], out.parts[l]);
    out.ranges_ok = out.ranges_ok && dc.ranges_ok;
    out.reconstruction_ok = out.reconstruction_ok && dc.reconstruction_error <= 1e-9;
  }
  if (config.rank) {
    bool rank_ok = true;
    for (const PolynomialFactor* f : {&out.factor, &out.refined}) {
      const FactorRank fr = factor_rank(*f);
      rank_ok = rank_ok && (fr.infinite || fr.min_rank >= config.rank(f->params().degree(), f->params().norm()));
    }
    out.rank_ok = rank_ok;
  }

  const ParameterList& I = out.factor.params();
  const ParameterList& J = out.refined.params();
  std::optional<SubatomSelector> best;
  SelectorCheck best_check;
  for (int attempt = 0; attempt < std::max(config.selector_retries, 1); ++attempt) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(attempt));
    SubatomSelector s = SubatomSelector::random(I, J, rng);
    const SelectorCheck c = check_selector(s, fs, out.parts, out.factor, out.refined, out.theta_bound, config.zeta);
    out.selector_attempts = attempt + 1;
    const bool better = !best || c.small_norm_violations < best_check.small_norm_violations ||
                        (c.small_norm_violations == best_check.small_norm_violations &&
                         c.bad_fraction < best_check.bad_fraction);
    if (better) {
      best = s;
      best_check = c;
    }
    if (c.ok()) break;
  }
  if (!best_check.ok()) {
    throw SelectorRetryExceeded("no subatom selector passed within the retry cap", *best, best_check);
  }
  out.selector = *best;
  out.selector_check = best_check;
  return out;
}

}  // namespace hofa
