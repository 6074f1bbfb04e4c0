#pragma once

namespace splitbound {

/// Exit codes: 0 success, 1 verification failure, 2 bad arguments.
int run_cli(int argc, const char* const* argv);

/// Parallelism cap: min(hardware, SPLITBOUND_THREADS), at least 1.
int thread_cap();

}  // namespace splitbound
