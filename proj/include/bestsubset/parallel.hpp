#pragma once

#include <cstddef>
#include <functional>

namespace bestsubset {

/// Worker count: `requested` when positive, otherwise the BEST_SUBSET_THREADS
/// environment variable, otherwise the hardware concurrency. Never below 1.
unsigned resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is split
/// into contiguous blocks; body must only write to slots owned by index i.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace bestsubset
