#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfem::cli {

enum ExitCode : int {
    kOk = 0,
    kRuntimeError = 1,
    kUsageError = 2,
    kRateCheckFailed = 3,
};

/// Runs the command line `args` (without the program name). Tables and reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sfem::cli
