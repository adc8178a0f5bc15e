#pragma once

#include <cstddef>
#include <functional>

namespace mcf {

/// Worker count: MCF_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, count), split in contiguous blocks across
/// worker threads. Results must be written to disjoint slots, which keeps
/// output independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mcf
