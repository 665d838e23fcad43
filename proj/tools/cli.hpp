#pragma once

#include <iosfwd>

namespace pregols::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoOrParse = 1;
inline constexpr int kAssumption = 2;
inline constexpr int kOracleMismatch = 3;

/// Parses argv and runs one subcommand. Results go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pregols::cli
