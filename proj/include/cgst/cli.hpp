#pragma once

#include <ostream>

namespace cgst::cli {

// Exit codes: 0 success, 1 usage or validation error, 2 numerical invariant failure.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kInvariantFailure = 2;

// argv[0] is the program name. Reports go to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cgst::cli
