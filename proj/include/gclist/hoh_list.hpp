#pragma once

#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gclist/alloc_stats.hpp"

namespace gclist {

struct HoHNode {
  std::int64_t key;
  HoHNode* next = nullptr;
  std::mutex nodeLock;

  explicit HoHNode(std::int64_t k) : key(k) {}
};

/// Hand-over-hand (lock-coupling) list: traversal acquires the next node's
/// lock before releasing the current one. Removal frees the node immediately;
/// holding both locks guarantees nobody else stands on it.
class HoHList {
 public:
  using Node = HoHNode;

  static constexpr std::int64_t kHeadKey = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kTailKey = std::numeric_limits<std::int64_t>::max();

  HoHList() {
    head_ = newNode(kHeadKey);
    tail_ = newNode(kTailKey);
    head_->next = tail_;
  }

  HoHList(const HoHList&) = delete;
  HoHList& operator=(const HoHList&) = delete;

  ~HoHList() {
    Node* n = head_;
    while (n != nullptr) {
      Node* next = n->next;
      freeNode(n);
      n = next;
    }
  }

  bool add(std::int64_t key) {
    requireUserKey(key);
    head_->nodeLock.lock();
    Node* pred = head_;
    Node* curr = pred->next;
    curr->nodeLock.lock();
    while (curr->key < key) {
      pred->nodeLock.unlock();
      pred = curr;
      curr = curr->next;
      curr->nodeLock.lock();
    }
    bool added = false;
    if (curr->key != key) {
      Node* node = newNode(key);
      node->next = curr;
      pred->next = node;
      added = true;
    }
    curr->nodeLock.unlock();
    pred->nodeLock.unlock();
    return added;
  }

  bool remove(std::int64_t key) {
    requireUserKey(key);
    head_->nodeLock.lock();
    Node* pred = head_;
    Node* curr = pred->next;
    curr->nodeLock.lock();
    while (curr->key < key) {
      pred->nodeLock.unlock();
      pred = curr;
      curr = curr->next;
      curr->nodeLock.lock();
    }
    if (curr->key != key) {
      curr->nodeLock.unlock();
      pred->nodeLock.unlock();
      return false;
    }
    pred->next = curr->next;
    curr->nodeLock.unlock();
    pred->nodeLock.unlock();
    freeNode(curr);
    return true;
  }

  bool contains(std::int64_t key) {
    requireUserKey(key);
    head_->nodeLock.lock();
    Node* pred = head_;
    Node* curr = pred->next;
    curr->nodeLock.lock();
    while (curr->key < key) {
      pred->nodeLock.unlock();
      pred = curr;
      curr = curr->next;
      curr->nodeLock.lock();
    }
    const bool found = curr->key == key;
    curr->nodeLock.unlock();
    pred->nodeLock.unlock();
    return found;
  }

  /// Quiescent-only.
  std::vector<std::int64_t> keys() const {
    std::vector<std::int64_t> out;
    for (Node* n = head_->next; n != tail_; n = n->next) out.push_back(n->key);
    return out;
  }

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
};

}  // namespace gclist
