#pragma once

#include <iosfwd>

#include "twinops/error.hpp"

namespace twinops::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoSolution = 3;
inline constexpr int kExitIo = 4;

/// 3 for NoPath/NoDetections, 4 for I/O and bind failures, 2 otherwise.
int exit_code_for(Errc code);

/// Entry point of the `twinops` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twinops::cli
