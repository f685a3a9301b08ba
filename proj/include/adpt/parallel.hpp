#pragma once

#include <cstddef>
#include <functional>

namespace adpt {

// Number of worker threads used by parallel_for.  Defaults to the hardware
// concurrency and can be overridden with the ADPT_THREADS environment
// variable (values < 1 fall back to 1).
int thread_count();

// Runs fn(i) for i in [0, count).  Executes inline when count is small or a
// single thread is configured; otherwise splits the range over a small
// thread pool.  fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace adpt
