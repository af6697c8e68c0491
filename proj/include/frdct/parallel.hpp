#pragma once

#include <cstddef>
#include <functional>

namespace frdct {

// Number of workers to use: `requested` if positive, else the FRDCT_JOBS
// environment variable, else the hardware concurrency.
int resolve_jobs(int requested = 0);

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Tasks are
// distributed by static interleaving (task i runs on thread i % jobs), so the
// work done per task is identical regardless of the thread count; callers
// keep determinism by writing task i's output to slot i and reducing
// sequentially afterwards. Exceptions are captured and the first one (by task
// index) is rethrown after all threads join.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace frdct
