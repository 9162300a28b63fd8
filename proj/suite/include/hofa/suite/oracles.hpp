#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "hofa/hofa.hpp"

/// Brute-force reference computations written directly from the definitions.
/// They share no code paths with the library routines they check beyond the
/// basic point encoding of Space.
namespace hofa::oracle {

/// All s in Z/p^{k+1} with s = b^d (mod p) and s^{p-1} = 1.
std::vector<std::int64_t> sigma_solutions(int p, int b, int d, int k);

/// E_{x,h_1..h_d} prod_{w in {0,1}^d} C^{|w|} f(x + w.h), summed term by term.
std::complex<double> gowers_power(const std::vector<std::complex<double>>& f, int p, int n, int d);
double gowers_norm(const std::vector<std::complex<double>>& f, int p, int n, int d);

/// Pairs (x, y) with f(x) + f(y) != f(x + y), and p^{2n}.
std::pair<std::uint64_t, std::uint64_t> blr_count(const std::vector<int>& f, int p, int n);

/// Whether the points are linearly independent, by counting their span.
bool independent(const Space& space, const std::vector<Point>& x);

/// Every d-dimensional subspace of F_p^n as (sorted point set, one basis).
std::vector<std::pair<std::vector<Point>, std::vector<Point>>> subspaces(int p, int n, int d);

/// Number of x in V^ell with f(L_i(x)) = psi(i) for all i, optionally only
/// independent tuples.
std::uint64_t instance_count(const std::vector<int>& f, int p, int n, const LinearSystem& system,
                             const std::vector<int>& psi, bool generic);

/// Value tuples (P(L_1 x), ..., P(L_m x)) over every polynomial P on F_p^n of
/// exact type (d,k) with P(0) = 0 and every x, closed under addition.
std::set<std::vector<std::int64_t>> consistency_set(DegreeDepth type, const LinearSystem& system, int n);

/// E[f | atoms] where atoms[x] labels the cell of x.
std::vector<std::complex<double>> cell_average(const std::vector<std::complex<double>>& f,
                                               const std::vector<std::uint64_t>& atoms);

/// (E |f|^2)^{1/2}.
double l2(const std::vector<std::complex<double>>& f);

/// Residues mod p^{depth+1} of a monomial representation at every point,
/// computed term by term; depth must be at least the largest term depth.
std::vector<std::int64_t> poly_residues(const MonomialRep& poly, int depth);

/// P(bx) = s_b P(x) for every unit b, with s_b the unique solution of
/// sigma_solutions(p, b, d, k); constants are homogeneous with s_b = 1.
bool homogeneous_of_type(const MonomialRep& poly, DegreeDepth type);

/// (max over terms of sum i + k(p-1), max term depth) read off the terms.
DegreeDepth symbolic_type(const MonomialRep& poly);

}  // namespace hofa::oracle
