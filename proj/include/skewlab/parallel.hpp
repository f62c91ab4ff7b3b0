#pragma once

#include <cstddef>
#include <functional>

namespace skewlab {

// Worker count: hardware concurrency capped by SKEWLAB_THREADS.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Results must be written to slot i by the
// caller so output order does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace skewlab
