#pragma once

#include <cstddef>
#include <functional>

namespace cocycle {

/// Worker count used when an operation is not given one explicitly.
/// Defaults to 1; the CLI sets it from --threads / COCYCLE_LAB_THREADS.
void set_default_threads(int n);
int default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Each index is processed exactly once; callers write results into
/// per-index slots so the reduction order never depends on scheduling.
/// The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace cocycle
