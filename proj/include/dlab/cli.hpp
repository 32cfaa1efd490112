#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlab {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitParse = 2,
  kExitNumeric = 3,
};

/// Runs the `dlab` command line. `args` excludes the program name.
/// Tables and reports go to `out` (or --out), summaries and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyReport {
  int passed = 0;
  int failed = 0;
};

/// Built-in invariant suite; one PASS/FAIL line per check on `out`.
VerifyReport run_verify(bool quick, std::ostream& out);

}  // namespace dlab
