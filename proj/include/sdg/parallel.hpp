#pragma once

#include <cstddef>
#include <functional>

namespace sdg {

/// Worker count for stage loops: SDG_THREADS if set and positive, else 1.
int thread_count();

/// Runs body(i) for i in [0, n) on thread_count() threads with a static block
/// partition. body must only write to slots owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sdg
