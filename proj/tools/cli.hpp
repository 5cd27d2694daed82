#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pareto::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// args excludes the program name. Output CSV goes to `out` unless a
/// subcommand is given --output; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pareto::cli
