#include <cstdlib>
#include <iostream>
#include <string>

#include "hofa/suite/acceptance.hpp"

/// Prints one PASS/FAIL line per criterion; with arguments, runs only the
/// listed criterion ids.
int main(int argc, char** argv) {
  using namespace hofa::acceptance;
  bool all = true;
  auto report = [&](const CriterionResult& r) {
    std::cout << format(r) << std::endl;
    all = all && r.pass;
  };
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) report(run_criterion(std::stoi(argv[i])));
  } else {
    for (int id = 1; id <= criterion_count; ++id) report(run_criterion(id));
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
