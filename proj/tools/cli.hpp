#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flc::cli {

/// Exit codes: 0 success, 1 bad input (usage, config, spec or token
/// errors), 2 internal error, 3 `equiv` found a disagreement.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInternal = 2;
inline constexpr int kExitMismatch = 3;

/// Entry point behind the `flc` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flc::cli
