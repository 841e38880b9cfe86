#pragma once

#include <iosfwd>

namespace hat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

// Entry point of the hat4rd tool: subcommands train, eval, attack,
// landscape and gen-synthetic. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hat::cli
