#pragma once

#include <cstddef>
#include <functional>

namespace hsap {

/// Number of worker threads implied by a --threads style setting:
/// 0 means "machine parallelism".
int resolve_thread_count(int requested);

/// Runs fn(begin, end) over a static partition of [0, total). Results must
/// be written to disjoint slots so the outcome is identical for any thread
/// count; reductions are left to the (sequential) caller.
void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace hsap
