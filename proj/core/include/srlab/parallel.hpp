#pragma once

#include <cstddef>
#include <functional>

namespace srlab {

/// Resolves a requested worker count; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
/// must write only to their own output slot; the first exception thrown by
/// any item is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace srlab
