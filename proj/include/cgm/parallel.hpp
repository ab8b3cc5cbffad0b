#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace cgm {

// CGM_THREADS env var, else hardware concurrency.
int default_thread_count();

// Runs fn(0..n-1) across a shared atomic counter. Replica jobs are
// independent; callers aggregate into per-index slots so results do not
// depend on scheduling.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn, int threads = 0);

} // namespace cgm
