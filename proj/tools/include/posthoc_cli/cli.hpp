#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace posthoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;      // unreadable input, malformed file, bad flags
inline constexpr int kExitDomain = 2;  // precondition or domain failure

/// Runs one invocation; args excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posthoc::cli
