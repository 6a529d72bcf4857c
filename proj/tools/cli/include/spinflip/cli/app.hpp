#pragma once

#include <iosfwd>

namespace spinflip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSingularity = 3;
inline constexpr int kExitIntegrator = 4;
inline constexpr int kExitDegenerate = 5;

/// Entry point of the `spinflip` tool. Tables go to `out` unless an output
/// path is configured; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinflip::cli
