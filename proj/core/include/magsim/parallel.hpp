#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace magsim {

// Process-wide worker count used by the data-parallel loops. Results never
// depend on it: every loop writes into per-index slots and merges in index
// order.
void set_worker_threads(unsigned threads);
unsigned worker_threads();

// Runs body(i) for i in [0, count) on up to worker_threads() threads using a
// static contiguous partition. The exception raised by the lowest failing
// index is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace magsim
