#pragma once

#include <iosfwd>

namespace onebit {

/// Runs the small-instance oracle and property suite, printing one pass/fail
/// line per check. Returns true when every check passes.
bool run_selfcheck(std::ostream& out);

}  // namespace onebit
