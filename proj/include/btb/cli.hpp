#pragma once

namespace btb {

/// Entry point of the `btb` executable. Returns 0 on success, 1 when
/// processing fails (diagnostic on stderr) and 2 on a usage error.
int run_cli(int argc, char** argv);

}  // namespace btb
