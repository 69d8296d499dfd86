#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gclist/alloc_stats.hpp"
#include "gclist/stamped_ref.hpp"

namespace gclist {

struct LazyNode {
  const std::int64_t key;
  AtomicStampedReference<LazyNode> next;  // low stamp bit = marked
  std::mutex nodeLock;
  LazyNode* retiredNext = nullptr;  // teardown bookkeeping only

  explicit LazyNode(std::int64_t k) : key(k) {}
};

/// Lazy list without reclamation: removed nodes are marked, unlinked and then
/// neither freed nor reused, so every successful add costs a fresh allocation.
/// Stands in for the list family that leaks by construction. The marked flag
/// lives in the low bit of the next-cell's stamp; contains() is wait-free.
class LeakyLazyList {
 public:
  using Node = LazyNode;

  static constexpr std::int64_t kHeadKey = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kTailKey = std::numeric_limits<std::int64_t>::max();

  LeakyLazyList() {
    head_ = newNode(kHeadKey);
    tail_ = newNode(kTailKey);
    head_->next.set(tail_, 0);
  }

  LeakyLazyList(const LeakyLazyList&) = delete;
  LeakyLazyList& operator=(const LeakyLazyList&) = delete;

  ~LeakyLazyList() {
    Node* n = head_;
    while (n != nullptr) {
      Node* next = n->next.getReference();
      freeNode(n);
      n = next;
    }
    // Unlinked nodes are unreachable from head; they sit on the retired chain.
    n = graveyard_.load(std::memory_order_acquire);
    while (n != nullptr) {
      Node* next = n->retiredNext;
      freeNode(n);
      n = next;
    }
  }

  bool add(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Node* pred = head_;
      Node* curr = pred->next.getReference();
      while (curr->key < key) {
        pred = curr;
        curr = curr->next.getReference();
      }
      pred->nodeLock.lock();
      curr->nodeLock.lock();
      if (validate(pred, curr)) {
        bool added = false;
        if (curr->key != key) {
          Node* node = newNode(key);
          node->next.set(curr, 0);
          pred->next.set(node, pred->next.getStamp());
          added = true;
        }
        curr->nodeLock.unlock();
        pred->nodeLock.unlock();
        return added;
      }
      curr->nodeLock.unlock();
      pred->nodeLock.unlock();
    }
  }

  bool remove(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Node* pred = head_;
      Node* curr = pred->next.getReference();
      while (curr->key < key) {
        pred = curr;
        curr = curr->next.getReference();
      }
      pred->nodeLock.lock();
      curr->nodeLock.lock();
      if (validate(pred, curr)) {
        bool removed = false;
        if (curr->key == key) {
          const auto snap = curr->next.get();
          curr->next.set(snap.node, snap.stamp | 1);  // logical deletion
          pred->next.set(snap.node, pred->next.getStamp());  // physical
          retire(curr);
          removed = true;
        }
        curr->nodeLock.unlock();
        pred->nodeLock.unlock();
        return removed;
      }
      curr->nodeLock.unlock();
      pred->nodeLock.unlock();
    }
  }

  // Wait-free: one pass, no locks, no retries.
  bool contains(std::int64_t key) {
    requireUserKey(key);
    Node* curr = head_;
    while (curr->key < key) curr = curr->next.getReference();
    return curr->key == key && !isMarked(curr->next.getStamp());
  }

  static bool isMarked(std::uint64_t stamp) { return (stamp & 1) != 0; }

  /// Quiescent-only.
  std::vector<std::int64_t> keys() const {
    std::vector<std::int64_t> out;
    for (Node* n = head_->next.getReference(); n != tail_;
         n = n->next.getReference()) {
      out.push_back(n->key);
    }
    return out;
  }

 private:
  static void requireUserKey(std::int64_t key) {
    if (key == kHeadKey || key == kTailKey) {
      throw std::domain_error("key reserved for list sentinel");
    }
  }

  static bool validate(Node* pred, Node* curr) {
    const auto predSnap = pred->next.get();
    return !isMarked(predSnap.stamp) && !isMarked(curr->next.getStamp()) &&
           predSnap.node == curr;
  }

  // Removed nodes are never reclaimed while the list lives; they are chained
  // up only so the destructor can release them.
  void retire(Node* n) {
    Node* top = graveyard_.load(std::memory_order_relaxed);
    do {
      n->retiredNext = top;
    } while (!graveyard_.compare_exchange_weak(top, n, std::memory_order_release,
                                               std::memory_order_relaxed));
  }

  static Node* newNode(std::int64_t key) {
    alloc_stats::countNodeAlloc();
    return new Node(key);
  }
  static void freeNode(Node* n) {
    delete n;
    alloc_stats::countNodeFree();
  }

  Node* head_;
  Node* tail_;
  std::atomic<Node*> graveyard_{nullptr};
};

}  // namespace gclist
