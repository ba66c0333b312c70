#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dtinf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns 0 when every
/// check holds, 1 when an inequality fails and 2 on usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dtinf::cli
