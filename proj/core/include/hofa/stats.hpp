#pragma once

#include <cstdint>
#include <utility>

namespace hofa {

/// Two-sided 95% normal quantile.
inline constexpr double z95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = z95);

}  // namespace hofa
