#pragma once

#include <cstdint>

namespace gclist::alloc_stats {

struct Totals {
  std::int64_t nodeAllocs = 0;
  std::int64_t nodeFrees = 0;
  std::int64_t wrapperAllocs = 0;
  std::int64_t wrapperFrees = 0;

  std::int64_t nodesNet() const { return nodeAllocs - nodeFrees; }
  std::int64_t wrappersNet() const { return wrapperAllocs - wrapperFrees; }
};

// Thread-local accounting, bumped at every list-node or queue-wrapper
// allocation/release site. Recycling a node through a pool touches nothing.
void countNodeAlloc() noexcept;
void countNodeFree() noexcept;
void countWrapperAlloc() noexcept;
void countWrapperFree() noexcept;

/// Sum over all threads' counters, including threads that already exited.
Totals consolidate();

}  // namespace gclist::alloc_stats
