#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssb::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one ssbkit invocation. args excludes the program name. Returns the
/// process exit code: 0 success, 1 validation or precondition failure, 2
/// non-convergence or unsupported capability.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssb::cli
