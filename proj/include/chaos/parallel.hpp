#pragma once

#include <cstddef>
#include <functional>

namespace chaos {

/// Worker count: CHAOS_BOUNDS_THREADS if set (>= 1), else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, count). Results must be written to per-index
/// slots; nested calls from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace chaos
