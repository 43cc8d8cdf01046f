#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jss::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUsage = 64;

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one `jss` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jss::cli
