#pragma once

// The `softedge` command line: tabulate, simulate, validate, coeffs, derive, pq.
// Exit codes: 0 success, 1 validation failure or mismatch, 2 usage error.

#include <ostream>

namespace softedge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. Results go to `--out` when given, otherwise to out;
/// diagnostics go to err. A `--config FILE` JSON object supplies option
/// values by long name; flags on the command line override it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace softedge::cli
