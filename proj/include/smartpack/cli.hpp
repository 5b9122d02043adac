#pragma once

#include <iosfwd>

namespace smartpack {

/// Entry point behind the `smartpack` binary. Returns 0 on success, 1 on a
/// validation error, 2 on an IO error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smartpack
