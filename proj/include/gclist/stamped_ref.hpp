#pragma once

#include <atomic>
#include <cstdint>
#include <type_traits>

namespace gclist {

/// One consistent observation of a stamped cell: the reference and the stamp
/// were read in a single atomic action, never as a mix of two writes.
template <typename NodeT>
struct StampedSnapshot {
  NodeT* node = nullptr;
  std::uint64_t stamp = 0;

  friend bool operator==(const StampedSnapshot&, const StampedSnapshot&) = default;
};

/// A (reference, stamp) pair that is read, written and compare-and-set as one
/// unit. The stamp is a full 64-bit counter, so wraparound is unreachable.
///
/// Reads are acquire, writes are release, compareAndSet is a full barrier.
template <typename NodeT>
class AtomicStampedReference {
 public:
  using Snapshot = StampedSnapshot<NodeT>;

  AtomicStampedReference() noexcept : cell_(Snapshot{}) {}
  AtomicStampedReference(NodeT* ref, std::uint64_t stamp) noexcept
      : cell_(Snapshot{ref, stamp}) {}

  AtomicStampedReference(const AtomicStampedReference&) = delete;
  AtomicStampedReference& operator=(const AtomicStampedReference&) = delete;

  Snapshot get() const noexcept { return cell_.load(std::memory_order_acquire); }

  NodeT* getReference() const noexcept { return get().node; }

  std::uint64_t getStamp() const noexcept { return get().stamp; }

  void set(NodeT* ref, std::uint64_t stamp) noexcept {
    cell_.store(Snapshot{ref, stamp}, std::memory_order_release);
  }

  /// Replaces the pair iff both the reference and the stamp match exactly.
  bool compareAndSet(NodeT* expectRef, NodeT* newRef, std::uint64_t expectStamp,
                     std::uint64_t newStamp) noexcept {
    Snapshot expected{expectRef, expectStamp};
    return cell_.compare_exchange_strong(expected, Snapshot{newRef, newStamp},
                                         std::memory_order_seq_cst,
                                         std::memory_order_relaxed);
  }

 private:
  static_assert(std::is_trivially_copyable_v<Snapshot>);
  // No padding: compare_exchange compares object representations.
  static_assert(std::has_unique_object_representations_v<Snapshot>);
  static_assert(sizeof(Snapshot) == sizeof(NodeT*) + sizeof(std::uint64_t));

  std::atomic<Snapshot> cell_;
};

}  // namespace gclist
