#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace blockfade::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidationFailed = 3;

// Runs one command. args excludes the program name. Results go to `out`
// (or the --out file); diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blockfade::cli
