#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitUsage = 64;

/// Runs one command line (without the program name). JSON reports and CSV
/// tables go to `out` unless --out names a directory; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);

/// Shortest round-trip decimal representation with '.' as separator.
std::string format_number(double v);

}  // namespace conekit::cli
