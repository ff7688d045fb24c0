#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ptlab::cli {

/// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// Runs `ptlab <args...>` in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptlab::cli
