#pragma once

#include <iosfwd>
#include <string_view>

namespace casimir::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNumericalFailure = 3,
  kExpectationMismatch = 4,
  kOutOfScope = 5,
};

/// Entry point behind the `casimir` executable. Tables go to `out` unless
/// --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
