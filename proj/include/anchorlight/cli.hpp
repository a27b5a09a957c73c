#pragma once

#include <iosfwd>

namespace anchorlight::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// `anchorlight [--config FILE] [--index PATH] {crawl|analyze|search|serve} ...`
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anchorlight::cli
