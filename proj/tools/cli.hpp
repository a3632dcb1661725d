#pragma once

#include <ostream>

namespace joa::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Entry point shared by the `joa` binary and the tests. `out` receives
/// default (stdout) output, `err` diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace joa::cli
