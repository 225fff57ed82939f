#pragma once

namespace onebit {

/// Entry point of the simulator CLI. Returns 0 on success, 1 on a
/// configuration error, 2 on an I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace onebit
