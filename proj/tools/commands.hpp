#pragma once

#include <iosfwd>

namespace schervish::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;        // bad input or flags; JSON error on stderr
inline constexpr int kVerifyFailed = 2;   // an oracle cross-check disagreed

/// Entry point shared by the executable and the tests. Reports go to `out`
/// unless --output names a file; errors go to `err` as JSON.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace schervish::cli
