#pragma once

#include <cstddef>
#include <functional>

namespace mfglab {

// Worker count: hardware concurrency, capped by MFGLAB_THREADS when set.
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
// exception thrown by any task is rethrown after all workers joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mfglab
