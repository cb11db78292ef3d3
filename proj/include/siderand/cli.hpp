#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace siderand::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBelowFloor = 1;  // also: degenerate distribution
inline constexpr int kExitTimer = 2;       // CoarseTimer / ClockUnavailable
inline constexpr int kExitUsage = 64;
inline constexpr int kExitDataError = 65;

/// Runs the command line `args` (args[0] is the program name). Reports and
/// payloads go to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace siderand::cli
