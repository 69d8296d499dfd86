#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <mutex>

#include "gclist/alloc_stats.hpp"
#include "gclist/stamped_ref.hpp"

namespace gclist {

// A pool is a concurrent FIFO of retired nodes: set(node) hands a node over
// for reuse, get() returns one or nullptr when the pool is empty. The node is
// opaque payload; the pool never reads or writes its fields. Every element
// handed to set() comes back from get() at most once.
//
// Two interchangeable flavors below: a two-lock queue and a lock-free queue
// whose head/tail swings are stamped against ABA. Both count their wrapper
// allocations separately from list nodes.

/// Blocking unbounded queue with one lock per end, so an enqueuer and a
/// dequeuer never contend with each other.
template <typename NodeT>
class TwoLockQueuePool {
 public:
  using payload_type = NodeT;

  TwoLockQueuePool() { head_ = tail_ = newWrapper(nullptr); }

  TwoLockQueuePool(const TwoLockQueuePool&) = delete;
  TwoLockQueuePool& operator=(const TwoLockQueuePool&) = delete;

  ~TwoLockQueuePool() {
    QNode* q = head_;
    while (q != nullptr) {
      QNode* next = q->next.getReference();
      freeWrapper(q);
      q = next;
    }
  }

  void set(NodeT* node) {
    if (node == nullptr) return;
    QNode* wrapper = newWrapper(node);
    std::lock_guard<std::mutex> guard(enqLock_);
    // Stamps are inert here; the two locks provide all the exclusion.
    const std::uint64_t stamp = tail_->next.getStamp();
    tail_->next.set(wrapper, stamp);
    tail_ = wrapper;
    setCalls_.fetch_add(1, std::memory_order_relaxed);
  }

  NodeT* get() {
    std::lock_guard<std::mutex> guard(deqLock_);
    QNode* first = head_->next.getReference();
    if (first == nullptr) return nullptr;
    NodeT* payload = first->payload;
    QNode* retired = head_;
    head_ = first;  // the dequeued wrapper becomes the new sentinel
    freeWrapper(retired);
    getHits_.fetch_add(1, std::memory_order_relaxed);
    return payload;
  }

  // Quiescent-only introspection.
  std::size_t residualSize() const {
    std::size_t n = 0;
    for (QNode* q = head_->next.getReference(); q != nullptr;
         q = q->next.getReference()) {
      ++n;
    }
    return n;
  }
  std::uint64_t setCalls() const { return setCalls_.load(std::memory_order_relaxed); }
  std::uint64_t getHits() const { return getHits_.load(std::memory_order_relaxed); }

 private:
  struct QNode {
    NodeT* payload;
    AtomicStampedReference<QNode> next;

    explicit QNode(NodeT* p) : payload(p) {}
  };

  static QNode* newWrapper(NodeT* payload) {
    alloc_stats::countWrapperAlloc();
    return new QNode(payload);
  }
  static void freeWrapper(QNode* q) {
    delete q;
    alloc_stats::countWrapperFree();
  }

  std::mutex enqLock_;
  std::mutex deqLock_;
  QNode* head_;  // sentinel; guarded by deqLock_
  QNode* tail_;  // guarded by enqLock_
  std::atomic<std::uint64_t> setCalls_{0};
  std::atomic<std::uint64_t> getHits_{0};
};

/// Lock-free unbounded queue. head and tail are stamped references whose
/// stamps increment on every successful swing; a half-finished enqueue is
/// completed by whoever encounters it.
///
/// Dequeued wrappers park on an internal stamped freelist instead of being
/// freed, so wrapper memory stays type-stable: a thread still holding an old
/// wrapper can safely read its cells, and its stale compareAndSet then fails
/// on the stamp.
template <typename NodeT>
class LockFreeQueuePool {
 public:
  using payload_type = NodeT;

  LockFreeQueuePool() {
    QNode* sentinel = newWrapper();
    head_.set(sentinel, 0);
    tail_.set(sentinel, 0);
  }

  LockFreeQueuePool(const LockFreeQueuePool&) = delete;
  LockFreeQueuePool& operator=(const LockFreeQueuePool&) = delete;

  ~LockFreeQueuePool() {
    QNode* q = head_.getReference();
    while (q != nullptr) {
      QNode* next = q->next.getReference();
      freeWrapper(q);
      q = next;
    }
    q = freeTop_.getReference();
    while (q != nullptr) {
      QNode* next = q->next.getReference();
      freeWrapper(q);
      q = next;
    }
  }

  void set(NodeT* node) {
    if (node == nullptr) return;
    QNode* wrapper = acquireWrapper(node);
    while (true) {
      const auto last = tail_.get();
      const auto next = last.node->next.get();
      const auto lastAgain = tail_.get();
      if (last.node != lastAgain.node || last.stamp != lastAgain.stamp) continue;
      if (next.node == nullptr) {
        if (last.node->next.compareAndSet(nullptr, wrapper, next.stamp,
                                          next.stamp + 1)) {
          tail_.compareAndSet(last.node, wrapper, last.stamp, last.stamp + 1);
          setCalls_.fetch_add(1, std::memory_order_relaxed);
          return;
        }
      } else {
        // Someone linked a node but has not swung tail yet; help them.
        tail_.compareAndSet(last.node, next.node, last.stamp, last.stamp + 1);
      }
    }
  }

  NodeT* get() {
    while (true) {
      const auto first = head_.get();
      const auto last = tail_.get();
      const auto next = first.node->next.get();
      const auto firstAgain = head_.get();
      if (first.node != firstAgain.node || first.stamp != firstAgain.stamp) {
        continue;
      }
      if (first.node == last.node) {
        if (next.node == nullptr) return nullptr;
        tail_.compareAndSet(last.node, next.node, last.stamp, last.stamp + 1);
      } else {
        NodeT* payload = next.node->payload.load(std::memory_order_relaxed);
        if (head_.compareAndSet(first.node, next.node, first.stamp,
                                first.stamp + 1)) {
          retireWrapper(first.node);
          getHits_.fetch_add(1, std::memory_order_relaxed);
          return payload;
        }
      }
    }
  }

  // Quiescent-only introspection.
  std::size_t residualSize() const {
    std::size_t n = 0;
    for (QNode* q = head_.getReference()->next.getReference(); q != nullptr;
         q = q->next.getReference()) {
      ++n;
    }
    return n;
  }
  bool debugTailCurrent() const {
    return tail_.getReference()->next.getReference() == nullptr;
  }
  std::uint64_t setCalls() const { return setCalls_.load(std::memory_order_relaxed); }
  std::uint64_t getHits() const { return getHits_.load(std::memory_order_relaxed); }

 private:
  struct QNode {
    std::atomic<NodeT*> payload{nullptr};
    AtomicStampedReference<QNode> next;
  };

  static QNode* newWrapper() {
    alloc_stats::countWrapperAlloc();
    return new QNode();
  }
  static void freeWrapper(QNode* q) {
    delete q;
    alloc_stats::countWrapperFree();
  }

  QNode* acquireWrapper(NodeT* payload) {
    while (true) {
      const auto top = freeTop_.get();
      if (top.node == nullptr) break;
      QNode* below = top.node->next.getReference();
      if (freeTop_.compareAndSet(top.node, below, top.stamp, top.stamp + 1)) {
        top.node->payload.store(payload, std::memory_order_relaxed);
        top.node->next.set(nullptr, top.node->next.getStamp() + 1);
        return top.node;
      }
    }
    QNode* q = newWrapper();
    q->payload.store(payload, std::memory_order_relaxed);
    return q;
  }

  void retireWrapper(QNode* q) {
    while (true) {
      const auto top = freeTop_.get();
      q->next.set(top.node, q->next.getStamp() + 1);
      if (freeTop_.compareAndSet(top.node, q, top.stamp, top.stamp + 1)) return;
    }
  }

  AtomicStampedReference<QNode> head_;
  AtomicStampedReference<QNode> tail_;
  AtomicStampedReference<QNode> freeTop_;
  std::atomic<std::uint64_t> setCalls_{0};
  std::atomic<std::uint64_t> getHits_{0};
};

}  // namespace gclist
