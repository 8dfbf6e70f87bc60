#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `spe` tool on `args` (args[0] is the program name). Reports go to
/// `out` unless --out redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-256 of `bytes` as lowercase hex.
std::string sha256_hex(const std::string& bytes);

}  // namespace spe::cli
