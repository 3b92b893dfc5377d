#pragma once

#include <cstddef>
#include <functional>

namespace prt {

/// Effective worker count: `requested` (0 = hardware concurrency), capped
/// by the PRT_THREADS environment variable when set. Always >= 1.
int worker_count(int requested = 0);

/// Runs body(i) for i in [0, n) on up to `workers` threads, handing out
/// chunks of `grain` indices. The first exception thrown is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> &body, std::size_t grain = 16);

}  // namespace prt
