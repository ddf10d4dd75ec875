#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace volmat {

/// Worker count from VOLMAT_THREADS, falling back to the hardware concurrency.
/// The value never affects numerical results.
int thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// run exactly once; if any throw, the exception from the lowest index is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace volmat
