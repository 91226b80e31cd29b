#pragma once

#include <cstddef>
#include <functional>

namespace layersplit {

/// Worker count used by parallel_for. Read once from LAYERSPLIT_THREADS
/// (0 or unset = hardware concurrency) unless overridden.
int thread_count();

/// Overrides the worker count for the current process; 0 restores the
/// environment/auto value.
void set_thread_count(int n);

/// Runs fn(i) for every i in [begin, end), split into contiguous chunks
/// across thread_count() workers. Callers must make fn(i) write only
/// index-addressed state so the result does not depend on the schedule.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace layersplit
