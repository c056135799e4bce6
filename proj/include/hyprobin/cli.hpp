#pragma once

#include "hyprobin/config.hpp"

#include <iosfwd>

namespace hyprobin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolver = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitViolation = 4;  // a margin fell below its tolerance
inline constexpr int kExitUsage = 64;

/// Executes one command. The summary table goes to `out`, warnings and
/// diagnostics to `err`. Report files are written once, at the end.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace hyprobin::cli
