#pragma once

#include <string>
#include <vector>

namespace hofa::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Measured quantities backing the verdict.
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int criterion_count = 12;

/// Runs one acceptance criterion (1..criterion_count). Exceptions raised by
/// the library are caught and reported as a failure.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_acceptance();

/// "PASS <id> <name>: <detail> (<seconds>s)" or the FAIL form.
std::string format(const CriterionResult& r);

}  // namespace hofa::acceptance
