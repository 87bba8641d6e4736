#pragma once

#include <cstddef>
#include <functional>

namespace tcs {

/// Number of worker threads used by edge scans and sweeps. Defaults to the
/// value of TCSPACE_THREADS if set, otherwise std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(i) for i in [0, count) across the worker pool. Iterations are
/// independent; callers write into preallocated per-index slots so that the
/// result does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tcs
