#pragma once

#include <functional>

namespace obs_scout {

/// Worker cap from OBS_SCOUT_THREADS; unset or 0 means hardware concurrency.
int worker_count();

/// Runs fn(0..n-1) across up to worker_count() threads. Each index writes only
/// its own slot, so results are deterministic regardless of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace obs_scout
