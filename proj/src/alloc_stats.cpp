#include "gclist/alloc_stats.hpp"

#include <atomic>
#include <memory>
#include <mutex>
#include <vector>

namespace gclist::alloc_stats {
namespace {

struct Record {
  std::atomic<std::int64_t> nodeAllocs{0};
  std::atomic<std::int64_t> nodeFrees{0};
  std::atomic<std::int64_t> wrapperAllocs{0};
  std::atomic<std::int64_t> wrapperFrees{0};
};

std::mutex& registryMutex() {
  static std::mutex m;
  return m;
}

// Records are kept alive after their thread exits so a later consolidate()
// still sees the thread's contribution.
std::vector<std::unique_ptr<Record>>& registry() {
  static std::vector<std::unique_ptr<Record>> r;
  return r;
}

Record& localRecord() {
  thread_local Record* rec = [] {
    auto owned = std::make_unique<Record>();
    Record* raw = owned.get();
    std::lock_guard<std::mutex> guard(registryMutex());
    registry().push_back(std::move(owned));
    return raw;
  }();
  return *rec;
}

}  // namespace

void countNodeAlloc() noexcept {
  localRecord().nodeAllocs.fetch_add(1, std::memory_order_relaxed);
}

void countNodeFree() noexcept {
  localRecord().nodeFrees.fetch_add(1, std::memory_order_relaxed);
}

void countWrapperAlloc() noexcept {
  localRecord().wrapperAllocs.fetch_add(1, std::memory_order_relaxed);
}

void countWrapperFree() noexcept {
  localRecord().wrapperFrees.fetch_add(1, std::memory_order_relaxed);
}

Totals consolidate() {
  std::lock_guard<std::mutex> guard(registryMutex());
  Totals totals;
  for (const auto& rec : registry()) {
    totals.nodeAllocs += rec->nodeAllocs.load(std::memory_order_relaxed);
    totals.nodeFrees += rec->nodeFrees.load(std::memory_order_relaxed);
    totals.wrapperAllocs += rec->wrapperAllocs.load(std::memory_order_relaxed);
    totals.wrapperFrees += rec->wrapperFrees.load(std::memory_order_relaxed);
  }
  return totals;
}

}  // namespace gclist::alloc_stats
