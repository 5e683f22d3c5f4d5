#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patchrank::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

// Environment variable holding the default --jobs value for `batch`.
inline constexpr const char *kJobsEnv = "PATCHRANK_JOBS";

// Runs one invocation. `args` excludes the program name. Reports go to `out`
// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace patchrank::cli
