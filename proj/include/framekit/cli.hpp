#pragma once

#include <iosfwd>

namespace framekit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one framekit command. Reports go to --out or `out`; messages to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace framekit
