#pragma once

// The fencepatrol command line: verify | build | search | render | bounds.
//
// Exit status: 0 when a schedule patrols or a search certifies, 1 when a
// schedule fails or a search is exhausted, 2 on invalid input or I/O errors.

#include <iosfwd>
#include <string>
#include <vector>

namespace fence {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one command. `args` excludes the program name.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fence
