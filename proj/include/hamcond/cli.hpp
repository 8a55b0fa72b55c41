#pragma once

#include <iosfwd>

namespace hamcond {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,  // correctly determined negative (non-Hamiltonian, invalid cycle)
  kExitUsage = 2,
  kExitCap = 3,       // attempt cap, budget, size limit, or the engine gave up
};

/// Parses argv and runs one subcommand (sample, hamilton, count, verify,
/// experiment). Primary output goes to `out` unless --out names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hamcond
