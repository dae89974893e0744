#pragma once

#include <cstddef>
#include <functional>

namespace irhm {

// Worker cap: IRHM_THREADS if set to a positive integer, else hardware concurrency.
unsigned thread_cap();

// Runs body(k) for k in [0, n); each index is visited exactly once.  Results
// written to per-index slots are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace irhm
