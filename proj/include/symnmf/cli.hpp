#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symnmf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitCheckFailed = 3;

inline constexpr const char* kVersion = "0.1.0";

// Entry point shared by the symnmf binary and the tests. args excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symnmf::cli
