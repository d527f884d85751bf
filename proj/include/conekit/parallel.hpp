#pragma once

#include <functional>

namespace conekit {

/// Worker count: CONEKIT_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
int worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is visited exactly once; the first exception thrown is rethrown.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace conekit
