#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hofa/field.hpp"
#include "hofa/linear_forms.hpp"

namespace hofa::detail {

/// Depth-first enumeration of x in V^ell. Each form is tested by `accept`
/// as soon as its last variable is assigned; with `generic` only linearly
/// independent tuples are explored. `visit` receives every accepted tuple
/// and returns false to stop. Returns the number of tuples visited.
std::uint64_t enumerate_instances(const Space& space, const LinearSystem& system, bool generic,
                                  const std::function<bool(int form, Point value)>& accept,
                                  const std::function<bool(const std::vector<Point>& x)>& visit);

}  // namespace hofa::detail
