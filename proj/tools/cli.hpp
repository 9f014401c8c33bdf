#pragma once

#include <iosfwd>

namespace asqkd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitIoError = 3;

/// Entry point shared by the executable and the tests. Subcommands: run, sweep,
/// attack-search, compare.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace asqkd::cli
