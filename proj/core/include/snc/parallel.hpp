#pragma once

#include <cstddef>
#include <functional>

namespace snc {

/// Worker count: SNC_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs fn(0..n-1) on up to thread_count() threads. Indices are claimed in
/// order; the first exception thrown is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace snc
