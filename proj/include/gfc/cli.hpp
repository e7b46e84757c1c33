#pragma once

#include <iosfwd>

namespace gfc {

// Full command-line entry point; parses argv, writes the JSON/CSV payload to
// out and diagnostics to err.  Returns 0 on success, 2 on usage errors, 1 on
// numerical failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gfc
