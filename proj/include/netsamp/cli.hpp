#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netsamp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (stats, sample, weights, estimate, simulate). args
/// excludes the program name. Results go to out, logs and errors to err.
int execute(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace netsamp
