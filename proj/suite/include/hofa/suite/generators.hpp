#pragma once

#include <vector>

#include "hofa/hofa.hpp"

/// Seeded random inputs shared by the acceptance suite and the unit tests.
namespace hofa::gen {

/// A monomial representation with 1..max_terms distinct terms of degree <= max_degree
/// and depth <= max_depth, plus a random depth-0 constant when with_alpha.
MonomialRep random_poly(int p, int n, int max_degree, int max_depth, Rng& rng, int max_terms = 4,
                        bool with_alpha = true);

/// Real values drawn uniformly from [0, 1].
ComplexFn random_unit_fn(int p, int n, Rng& rng);

/// Complex values drawn uniformly from the unit disc.
ComplexFn random_bounded_fn(int p, int n, Rng& rng);

/// An F_p-linear coloring x -> sum_i a_i x_i with colors numbered 0..p-1.
Coloring linear_coloring(int p, int n, const std::vector<int>& a);

}  // namespace hofa::gen
