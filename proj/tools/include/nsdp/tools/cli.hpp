#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nsdp::tools {

// Exit codes of the nsdp command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMaxOuter = 2;
inline constexpr int kExitSolveFailed = 3;  ///< inner failure or infeasible start
inline constexpr int kExitUsage = 64;
inline constexpr int kExitUnknownProblem = 65;

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace nsdp::tools
