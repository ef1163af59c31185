#pragma once

#include <cstddef>
#include <functional>

namespace logdim {

/// Process-wide worker count used by parallel_for. Zero means
/// std::thread::hardware_concurrency().
void set_worker_threads(std::size_t threads);
std::size_t worker_threads();

/// Runs body(i) for every i in [0, count) on a bounded pool of workers.
///
/// Results must be written to per-index slots; the order in which indices
/// execute is unspecified. Calls nested inside a running parallel_for execute
/// serially on the calling worker. If any body throws, the exception from the
/// smallest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace logdim
