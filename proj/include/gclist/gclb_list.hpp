#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "gclist/alloc_stats.hpp"
#include "gclist/stamped_ref.hpp"

namespace gclist {

struct LBNode {
  std::atomic<std::int64_t> key;
  AtomicStampedReference<LBNode> infoNext;
  std::mutex nodeLock;

  explicit LBNode(std::int64_t k) : key(k) {}

  void lock() { nodeLock.lock(); }
  bool tryLock() { return nodeLock.try_lock(); }
  void unlock() { nodeLock.unlock(); }
};

/// Lock-based ordered set over a singly linked list, recycling removed nodes
/// through a pool instead of freeing them.
///
/// Traversals are optimistic: after reading curr's snapshot off pred, pred's
/// stamp is re-read, and the walk restarts from head when it changed. A remove
/// bumps the predecessor's stamp when it unlinks, and the victim's own stamp
/// before pooling it, so a traversal standing on a node that got removed and
/// recycled always notices. Updates lock the (pred, curr) pair and validate
/// the window before touching anything.
template <typename PoolT>
class GCLBList {
 public:
  using Node = LBNode;
  static_assert(std::is_same_v<typename PoolT::payload_type, LBNode>);

  struct Window {
    Node* pred;
    Node* curr;
    std::uint64_t predSt;
    std::uint64_t currSt;
  };

  static constexpr std::int64_t kHeadKey = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kTailKey = std::numeric_limits<std::int64_t>::max();

  GCLBList() {
    head_ = newNode(kHeadKey);
    tail_ = newNode(kTailKey);
    head_->infoNext.set(tail_, 0);
  }

  GCLBList(const GCLBList&) = delete;
  GCLBList& operator=(const GCLBList&) = delete;

  ~GCLBList() {
    while (Node* n = pool_.get()) freeNode(n);
    Node* n = head_;
    while (n != nullptr) {
      Node* next = n->infoNext.getReference();
      freeNode(n);
      n = next;
    }
  }

  bool add(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Window w = find(key);
      Node* pred = w.pred;
      Node* curr = w.curr;
      lockPair(pred, curr);
      if (validate(pred, w.predSt, curr, w.currSt)) {
        if (curr->key.load(std::memory_order_relaxed) == key) {
          curr->unlock();
          pred->unlock();
          return false;
        }
        Node* node = pool_.get();
        if (node != nullptr) {
          // Recycled node: rewrite the key while it is held privately. Its
          // stamp is carried over unchanged, which is what lets a traversal
          // that still references it detect the reuse.
          node->key.store(key, std::memory_order_relaxed);
        } else {
          node = newNode(key);
        }
        const std::uint64_t nodeSt = node->infoNext.getStamp();
        node->infoNext.set(curr, nodeSt);
        const std::uint64_t predSt = pred->infoNext.getStamp();
        pred->infoNext.set(node, predSt);  // publish; pred's stamp unchanged
        curr->unlock();
        pred->unlock();
        return true;
      }
      curr->unlock();
      pred->unlock();
    }
  }

  bool remove(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Window w = find(key);
      Node* pred = w.pred;
      Node* curr = w.curr;
      lockPair(pred, curr);
      if (validate(pred, w.predSt, curr, w.currSt)) {
        if (curr->key.load(std::memory_order_relaxed) != key) {
          curr->unlock();
          pred->unlock();
          return false;
        }
        // Step 1: swing pred past curr, bumping pred's stamp.
        const std::uint64_t predSt = pred->infoNext.getStamp();
        Node* succ = curr->infoNext.getReference();
        pred->infoNext.set(succ, predSt + 1);
        // Step 2: bump curr's own stamp; reference stays as is.
        const auto snap = curr->infoNext.get();
        curr->infoNext.set(snap.node, snap.stamp + 1);
        pool_.set(curr);
        curr->unlock();
        pred->unlock();
        return true;
      }
      curr->unlock();
      pred->unlock();
    }
  }

  bool contains(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Node* pred = head_;
      auto snap = pred->infoNext.get();
      Node* curr = snap.node;
      std::uint64_t predSt = snap.stamp;
      std::int64_t currKey = curr->key.load(std::memory_order_relaxed);
      bool restart = false;
      while (true) {
        const bool breakTest = key <= currKey;
        const auto currSnap = curr->infoNext.get();
        const std::uint64_t nPredSt = pred->infoNext.getStamp();
        if (predSt != nPredSt) {
          restart = true;
          break;
        }
        if (breakTest) break;
        pred = curr;
        curr = currSnap.node;
        predSt = currSnap.stamp;
        currKey = curr->key.load(std::memory_order_relaxed);
      }
      if (restart) continue;
      return currKey == key;
    }
  }

  /// Walks to the first node with key >= the search key, returning it with its
  /// predecessor and both stamps as observed during the walk.
  Window find(std::int64_t key) {
    requireUserKey(key);
    // Fast path: head and tail are the only nodes.
    if (head_->infoNext.getReference() == tail_) {
      return Window{head_, tail_, head_->infoNext.getStamp(),
                    tail_->infoNext.getStamp()};
    }
    while (true) {
      Node* pred = head_;
      auto snap = pred->infoNext.get();
      Node* curr = snap.node;
      std::uint64_t predSt = snap.stamp;
      bool restart = false;
      while (true) {
        const bool breakTest = key <= curr->key.load(std::memory_order_relaxed);
        const auto currSnap = curr->infoNext.get();
        const std::uint64_t nPredSt = pred->infoNext.getStamp();
        if (predSt != nPredSt) {
          restart = true;  // pred changed under us; curr may be gone
          break;
        }
        if (breakTest) return Window{pred, curr, predSt, currSnap.stamp};
        pred = curr;
        curr = currSnap.node;
        predSt = currSnap.stamp;
      }
      if (restart) continue;
    }
  }

  /// Both nodes must be locked by the caller. True iff pred still references
  /// curr and neither stamp moved since the window was captured.
  static bool validate(Node* pred, std::uint64_t predSt, Node* curr,
                       std::uint64_t currSt) {
    const auto predSnap = pred->infoNext.get();
    const std::uint64_t nCurrSt = curr->infoNext.getStamp();
    return predSt == predSnap.stamp && currSt == nCurrSt &&
           curr == predSnap.node;
  }

  /// Quiescent-only: keys between the sentinels, in list order.
  std::vector<std::int64_t> keys() const {
    std::vector<std::int64_t> out;
    for (Node* n = head_->infoNext.getReference(); n != tail_;
         n = n->infoNext.getReference()) {
      out.push_back(n->key.load(std::memory_order_relaxed));
    }
    return out;
  }

  Node* headNode() { return head_; }
  Node* tailNode() { return tail_; }
  PoolT& pool() { return pool_; }

 private:
  static void requireUserKey(std::int64_t key) {
    if (key == kHeadKey || key == kTailKey) {
      throw std::domain_error("key reserved for list sentinel");
    }
  }

  // Lock pred, then try curr; on failure release pred and retry the lock step
  // with the same window. tryLock is what keeps this deadlock-free.
  static void lockPair(Node* pred, Node* curr) {
    while (true) {
      pred->lock();
      if (curr->tryLock()) return;
      pred->unlock();
    }
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
  PoolT pool_;
};

}  // namespace gclist
