#pragma once

#include <cstddef>
#include <functional>

namespace imdp {

/// Caps the worker threads used by library loops. 0 restores the default
/// (hardware concurrency).
void set_max_threads(std::size_t n);
std::size_t max_threads();

/// Runs body(i) for i in [0, n). Iterations must write disjoint data; the
/// first exception thrown by any iteration is rethrown after all workers
/// finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace imdp
