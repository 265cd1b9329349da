#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace balcast::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2 };

/// Runs one `balcast` invocation. `args` excludes the program name. Diagnostics go to `err`,
/// summaries to `out`; result files are written under `--out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace balcast::cli
