#pragma once

#include "walkoff/config.hpp"

namespace walkoff {

// Executes one validated run end to end, writing all artifact files and the
// manifest into config.out_dir. Returns 0 on success, 2 when some planes or
// cells failed but partial results were written. Config-level errors are
// thrown (the CLI maps them to exit 1).
int run(const RunConfig& config);

}  // namespace walkoff
