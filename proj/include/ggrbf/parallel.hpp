#pragma once

#include <cstddef>
#include <functional>

namespace ggrbf {

/// Worker cap for fan-out loops: hardware concurrency, reduced by the
/// GGRBF_LAB_THREADS environment variable when set.
std::size_t max_workers();

/// Runs fn(i) for i in [0, count), possibly across threads.  Tasks must be
/// independent; results should be written to index i of a pre-sized
/// container so the output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ggrbf
