#pragma once

#include <iosfwd>

namespace lognl::cli {

/// Exit codes of the front-end.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

/// Runs one subcommand (solve, eval, verify, torsion, fit, converge,
/// constants). Results go to files or `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lognl::cli
