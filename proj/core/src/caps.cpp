#include "hofa/caps.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>

#include "hofa/errors.hpp"

namespace hofa {
namespace {

std::uint64_t initial_cap() {
  if (const char* env = std::getenv("HOFA_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return default_enumeration_cap;
}

std::atomic<std::uint64_t>& cap_storage() {
  static std::atomic<std::uint64_t> cap{initial_cap()};
  return cap;
}

}  // namespace

std::uint64_t enumeration_cap() { return cap_storage().load(); }

void set_enumeration_cap(std::uint64_t cap) {
  if (cap == 0) throw InvalidParameter("enumeration cap must be positive");
  cap_storage().store(cap);
}

void require_within_cap(std::uint64_t count, std::string_view what) {
  const std::uint64_t cap = enumeration_cap();
  if (count > cap) {
    throw CapExceeded(std::string(what) + ": " + std::to_string(count) +
                      " evaluations exceed the enumeration cap " + std::to_string(cap));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

}  // namespace hofa
