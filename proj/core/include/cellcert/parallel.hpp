#pragma once

#include <functional>

namespace cellcert {

/// Number of workers to use: CELLCERT_THREADS when set, otherwise hardware
/// concurrency (at least 1).
int default_threads();

/// Runs fn(i) for i in [0, n) on a small worker pool. Work items must be
/// independent; results keyed by index stay deterministic regardless of the
/// pool size. threads <= 0 selects default_threads().
void parallel_for_index(long n, int threads,
                        const std::function<void(long)>& fn);

}  // namespace cellcert
