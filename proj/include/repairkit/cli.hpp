#pragma once

#include <iosfwd>

namespace repairkit {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSizeGuard = 3;

/// Runs the command line tool. `cqa` exits 0 when the query is certain and 1
/// otherwise; other subcommands exit 0 on success. Input errors exit 2,
/// size-guard refusals 3.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace repairkit
