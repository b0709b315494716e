#pragma once

#include <cstddef>
#include <functional>

namespace glyphlab {

// Worker count: min(hardware_concurrency, GLYPHLAB_NUM_THREADS if set).
int worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, one per
// worker. Each index is processed exactly once and results must be written to
// per-index slots by the caller, so the outcome is independent of thread
// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace glyphlab
