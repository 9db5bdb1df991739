#pragma once

#include <ostream>

namespace ncf {

/// ncflab entry point. Exit codes: 0 pass, 1 violations, 2 usage or parse
/// errors (--help exits 0).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncf
