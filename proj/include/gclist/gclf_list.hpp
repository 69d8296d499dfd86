#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "gclist/alloc_stats.hpp"
#include "gclist/stamped_ref.hpp"

namespace gclist {

struct LFNode {
  std::atomic<std::int64_t> key;
  AtomicStampedReference<LFNode> infoNext;

  explicit LFNode(std::int64_t k) : key(k) {}
};

/// Lock-free ordered set. Stamp parity carries the deletion mark: a node with
/// an even stamp is in the list, an odd stamp means logically deleted (or
/// parked in the pool).
///
/// remove() marks its victim by bumping the victim's own stamp by 1 (the CAS
/// that decides the operation), then unlinks it by swinging the predecessor
/// and bumping the predecessor's stamp by 2. Inserts bump the predecessor's
/// stamp by 2 as well, so a published cell never repeats a (reference, stamp)
/// pair and no update's CAS can succeed against a stale observation, however
/// long the updater was parked. Traversals help: a marked node is physically
/// unlinked and pooled before the walk advances past its position, so a
/// window never holds a marked curr and no two removers can claim the same
/// node. Fresh nodes start at stamp 0; pooled nodes arrive odd and add()
/// makes them even again before publishing.
template <typename PoolT>
class GCLFList {
 public:
  using Node = LFNode;
  static_assert(std::is_same_v<typename PoolT::payload_type, LFNode>);

  struct Window {
    Node* pred;
    Node* curr;
    std::uint64_t predSt;
    std::uint64_t currSt;
  };

  static constexpr std::int64_t kHeadKey = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kTailKey = std::numeric_limits<std::int64_t>::max();

  GCLFList() {
    head_ = newNode(kHeadKey);
    tail_ = newNode(kTailKey);
    head_->infoNext.set(tail_, 0);
  }

  GCLFList(const GCLFList&) = delete;
  GCLFList& operator=(const GCLFList&) = delete;

  ~GCLFList() {
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
    bool fromPool = false;
    Node* node = pool_.get();
    if (node == nullptr) {
      node = newNode(key);  // stamp 0, even
    } else {
      node->key.store(key, std::memory_order_relaxed);
      const std::uint64_t st = node->infoNext.getStamp();
      node->infoNext.set(nullptr, st + 1);  // odd -> even
      fromPool = true;
    }
    while (true) {
      Window w = find(key);
      if (w.curr->key.load(std::memory_order_relaxed) != key) {
        const std::uint64_t nodeSt = node->infoNext.getStamp();
        node->infoNext.set(w.curr, nodeSt);
        // The insert bumps pred's stamp by 2 like an unlink does, keeping its
        // parity. Every write to a published cell advances its stamp, so no
        // cell ever repeats a (reference, stamp) pair: without the bump, a
        // recycled node re-inserted under the same predecessor restores the
        // exact pair a stalled remover or helper captured before the node's
        // previous removal, and that thread's unlink CAS then severs a live
        // segment of the list.
        if (w.pred->infoNext.compareAndSet(w.curr, node, w.predSt,
                                           w.predSt + 2)) {
          return true;
        }
        continue;  // re-find, keeping the same node
      }
      // Key already present (possibly added by a faster thread mid-loop).
      if (!fromPool) {
        freeNode(node);  // unpublished, safe to release
      } else {
        const std::uint64_t st = node->infoNext.getStamp();
        node->infoNext.set(nullptr, st - 1);  // odd again
        pool_.set(node);
      }
      return false;
    }
  }

  bool remove(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Window w = find(key);
      if (w.curr->key.load(std::memory_order_relaxed) != key) return false;
      Node* succ = w.curr->infoNext.getReference();
      // Logical deletion: bump curr's stamp by 1. This CAS is the step that
      // decides the remove; at most one remover can win it.
      if (!w.curr->infoNext.compareAndSet(succ, succ, w.currSt, w.currSt + 1)) {
        continue;
      }
      // Physical deletion: swing pred past curr, bumping pred's stamp by 2.
      if (w.pred->infoNext.compareAndSet(w.curr, succ, w.predSt, w.predSt + 2)) {
        pool_.set(w.curr);
      } else {
        // Someone moved pred. One more traversal makes sure the node gets
        // unlinked (by us or a helper) before we report success.
        find(key);
      }
      return true;
    }
  }

  bool contains(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Node* pred = head_;
      std::int64_t currKey;
      std::uint64_t currSt;
      bool restart = false;
      while (true) {
        const auto snap = pred->infoNext.get();
        Node* curr = snap.node;
        const std::uint64_t predSt = snap.stamp;
        if (curr == nullptr) {
          // Only a stale predecessor can surface a null reference: a node
          // handed back to the pool by add()'s duplicate path carries
          // (null, odd), and its stamp rollback defeats the stamp check.
          restart = true;
          break;
        }
        currKey = curr->key.load(std::memory_order_relaxed);
        const auto currSnap = curr->infoNext.get();
        currSt = currSnap.stamp;
        const bool breakTest = key <= currKey;
        const std::uint64_t nPredSt = pred->infoNext.getStamp();
        if (predSt != nPredSt) {
          restart = true;
          break;
        }
        if (breakTest) break;
        pred = curr;  // marked nodes are walked past, not helped
      }
      if (restart) continue;
      return currKey == key && !isMarked(currSt);
    }
  }

  /// Walks to the first node with key >= the search key. Marked nodes met on
  /// the way are physically unlinked and pooled before the walk advances, so
  /// the returned curr was observed unmarked.
  Window find(std::int64_t key) {
    requireUserKey(key);
    while (true) {
      Node* pred = head_;
      auto snap = pred->infoNext.get();
      Node* curr = snap.node;
      std::uint64_t predSt = snap.stamp;
      bool restart = false;
      while (true) {
        const std::int64_t currKey = curr->key.load(std::memory_order_relaxed);
        const auto currSnap = curr->infoNext.get();
        Node* succ = currSnap.node;
        const std::uint64_t currSt = currSnap.stamp;
        if (isMarked(currSt)) {
          // Helping: finish the pending physical deletion before advancing.
          if (!pred->infoNext.compareAndSet(curr, succ, predSt, predSt + 2)) {
            restart = true;
            break;
          }
          pool_.set(curr);
          predSt += 2;
          curr = succ;  // pred stays; re-examine the new curr
          continue;
        }
        const bool breakTest = key <= currKey;
        const std::uint64_t nPredSt = pred->infoNext.getStamp();
        if (predSt != nPredSt) {
          restart = true;
          break;
        }
        if (breakTest) return Window{pred, curr, predSt, currSt};
        pred = curr;
        curr = succ;
        predSt = currSt;
      }
      if (restart) continue;
    }
  }

  static bool isMarked(std::uint64_t stamp) { return (stamp & 1) != 0; }

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
