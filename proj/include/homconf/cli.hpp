#pragma once

#include <iosfwd>

namespace homconf {

// Full command-line driver. Returns the process exit code: 0 all checks
// passed, 1 a check failed (or came back undecided at the bounds), 2 usage or
// parse error, 3 structural precondition failure. The machine-readable
// report goes to `out`; diagnostics and timing go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace homconf
