#pragma once

#include <ostream>

namespace hofa::cli {

/// Exit codes of hofa-lab.
inline constexpr int exit_ok = 0;
inline constexpr int exit_domain_error = 1;
inline constexpr int exit_cap_exceeded = 2;

/// Parses argv (argv[0] is the program name), runs the subcommand and writes
/// the report to `out` or to --out; diagnostics go to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hofa::cli
