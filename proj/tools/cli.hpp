#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecap::cli {

enum ExitCode : int { kOk = 0, kAssertionFailure = 1, kUsageError = 2 };

/// Runs one command line (without the program name). Reports go to `out` or to the --out file;
/// diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treecap::cli
