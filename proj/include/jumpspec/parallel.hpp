#pragma once

#include <cstddef>
#include <functional>

namespace jumpspec {

/// Worker count for a requested value; 0 means the hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers have stopped.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace jumpspec
