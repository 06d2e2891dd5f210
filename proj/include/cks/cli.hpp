#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cks {

/// Exit codes of `cli_dispatch`.
enum ExitCode : int { ExitOk = 0, ExitUsage = 1, ExitData = 2 };

/// Runs one `cks` command. `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cks
