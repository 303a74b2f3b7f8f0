#pragma once

#include <functional>

namespace cutdg {

// CUTDG_THREADS if set and positive, otherwise the hardware concurrency (at least 1).
int thread_count();

// Runs body(i) for i in [0, n) on up to thread_count() threads; rethrows the first exception.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace cutdg
