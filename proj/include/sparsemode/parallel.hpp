#pragma once

#include <cstddef>
#include <functional>

namespace sparsemode {

// Worker count for internal loops: hardware concurrency, capped by the
// SPARSEMODE_THREADS environment variable when it holds a positive integer.
std::size_t thread_count();

// Runs fn(i) for i in [0, n), split into contiguous chunks across workers.
// Callers must make iterations write to disjoint state; results are then
// independent of the schedule, keeping outputs deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sparsemode
