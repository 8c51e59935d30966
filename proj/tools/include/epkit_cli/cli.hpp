#pragma once

#include <iosfwd>

namespace epkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `epkit` tool. Reports go to `out` unless --output is
/// given; diagnostics and timing go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epkit::cli
