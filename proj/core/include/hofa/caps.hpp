#pragma once

#include <cstdint>
#include <string_view>

namespace hofa {

/// Default bound on the number of elementary evaluations an exact
/// enumeration may perform.
inline constexpr std::uint64_t default_enumeration_cap = std::uint64_t{1} << 26;

/// Current enumeration cap. Initialised from the HOFA_CAP environment
/// variable when it holds a positive integer.
std::uint64_t enumeration_cap();

/// Overrides the enumeration cap for the rest of the process.
void set_enumeration_cap(std::uint64_t cap);

/// Throws CapExceeded naming `what` when `count` exceeds the cap.
void require_within_cap(std::uint64_t count, std::string_view what);

/// Saturating product used to size enumerations without overflow.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

/// Saturating integer power.
std::uint64_t saturating_pow(std::uint64_t base, unsigned exp);

}  // namespace hofa
