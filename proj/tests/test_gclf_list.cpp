#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "gclist/alloc_stats.hpp"
#include "gclist/gclf_list.hpp"
#include "gclist/lincheck.hpp"
#include "gclist/pool.hpp"
#include "gclist/workload.hpp"

using gclist::GCLFList;
using gclist::LFNode;
using gclist::LockFreeQueuePool;
using gclist::TwoLockQueuePool;
using gclist::lincheck::SequentialSetOracle;

using LfList = GCLFList<LockFreeQueuePool<LFNode>>;

namespace {

// Pool decorator that counts how often each node is handed in.
template <typename NodeT>
class CountingPool {
 public:
  using payload_type = NodeT;

  void set(NodeT* node) {
    if (node != nullptr) {
      std::lock_guard<std::mutex> guard(mutex_);
      ++setCounts_[node];
    }
    inner_.set(node);
  }
  NodeT* get() { return inner_.get(); }

  int setCountFor(NodeT* node) {
    std::lock_guard<std::mutex> guard(mutex_);
    const auto it = setCounts_.find(node);
    return it == setCounts_.end() ? 0 : it->second;
  }

 private:
  gclist::LockFreeQueuePool<NodeT> inner_;
  std::mutex mutex_;
  std::unordered_map<NodeT*, int> setCounts_;
};

template <typename ListT>
LFNode* nodeWithKey(ListT& list, std::int64_t key) {
  for (LFNode* n = list.headNode()->infoNext.getReference(); n != list.tailNode();
       n = n->infoNext.getReference()) {
    if (n->key.load() == key) return n;
  }
  return nullptr;
}

// Simulates a remover that finished logical deletion and then stalled.
void markNode(LFNode* node) {
  const auto snap = node->infoNext.get();
  REQUIRE(node->infoNext.compareAndSet(snap.node, snap.node, snap.stamp,
                                       snap.stamp + 1));
}

}  // namespace

TEST_CASE("set semantics on a single thread") {
  LfList list;
  CHECK(list.add(5));
  CHECK(list.contains(5));
  CHECK_FALSE(list.add(5));
  CHECK(list.remove(5));
  CHECK_FALSE(list.contains(5));
  CHECK_FALSE(list.contains(1));
  CHECK(list.keys().empty());
}

TEST_CASE("sentinel keys are rejected") {
  LfList list;
  CHECK_THROWS_AS(list.add(LfList::kHeadKey), std::domain_error);
  CHECK_THROWS_AS(list.remove(LfList::kTailKey), std::domain_error);
  CHECK_THROWS_AS(list.contains(LfList::kHeadKey), std::domain_error);
}

TEST_CASE("removed node lands in the pool with an odd stamp") {
  LfList list;
  list.add(5);
  LFNode* victim = nodeWithKey(list, 5);
  REQUIRE(victim != nullptr);
  CHECK_FALSE(LfList::isMarked(victim->infoNext.getStamp()));

  CHECK(list.remove(5));
  LFNode* pooled = list.pool().get();
  REQUIRE(pooled == victim);
  CHECK(LfList::isMarked(pooled->infoNext.getStamp()));
  list.pool().set(pooled);
}

TEST_CASE("find on the empty list") {
  LfList list;
  const auto w = list.find(5);
  CHECK(w.pred == list.headNode());
  CHECK(w.curr == list.tailNode());
}

TEST_CASE("find unlinks and pools a logically deleted node") {
  LfList list;
  list.add(3);
  list.add(7);
  LFNode* n3 = nodeWithKey(list, 3);
  LFNode* n7 = nodeWithKey(list, 7);
  markNode(n3);

  const auto w = list.find(7);
  CHECK(w.pred == list.headNode());
  CHECK(w.curr == n7);
  CHECK(list.headNode()->infoNext.getReference() == n7);  // n3 unlinked

  LFNode* pooled = list.pool().get();
  CHECK(pooled == n3);
  CHECK(LfList::isMarked(pooled->infoNext.getStamp()));
  list.pool().set(pooled);
}

TEST_CASE("helper and remover race to pool a node exactly once") {
  SUBCASE("scripted: the remover's unlink CAS loses to the helper") {
    LfList list;
    list.add(3);
    LFNode* n3 = nodeWithKey(list, 3);
    LFNode* head = list.headNode();
    // The remover captured its window, then stalled after logical deletion.
    const auto window = list.find(3);
    REQUIRE(window.curr == n3);
    markNode(n3);
    LFNode* succ = n3->infoNext.getReference();

    list.find(3);  // helper passes by and unlinks
    CHECK(head->infoNext.getReference() != n3);

    // The stalled remover now attempts its physical deletion; the helper's
    // +2 on head's stamp makes it miss.
    CHECK_FALSE(head->infoNext.compareAndSet(n3, succ, window.predSt,
                                             window.predSt + 2));
    LFNode* pooled = list.pool().get();
    CHECK(pooled == n3);
    CHECK(list.pool().get() == nullptr);  // pooled exactly once
    list.pool().set(pooled);
  }

  SUBCASE("racing helpers pool the marked node once") {
    for (int round = 0; round < 100; ++round) {
      GCLFList<CountingPool<LFNode>> list;
      list.add(3);
      list.add(7);
      LFNode* n3 = nodeWithKey(list, 3);
      markNode(n3);

      std::atomic<int> ready{0};
      auto helper = [&] {
        ready.fetch_add(1);
        while (ready.load() < 2) {
        }
        list.find(7);
      };
      std::thread t1(helper);
      std::thread t2(helper);
      t1.join();
      t2.join();
      CHECK(list.pool().setCountFor(n3) == 1);
    }
  }
}

// A published cell must never repeat a (reference, stamp) pair; otherwise a
// parked updater's CAS could succeed against a state that was torn down and
// rebuilt while it slept (remove, recycle, re-insert under the same pred).
TEST_CASE("an insert advances the predecessor's stamp") {
  LfList list;
  list.add(3);
  list.add(5);
  LFNode* n3 = nodeWithKey(list, 3);

  const auto parked = list.find(5);  // captures (pred=n3, curr=n5)
  REQUIRE(parked.pred == n3);

  REQUIRE(list.add(4));  // lands between 3 and 5
  CHECK(n3->infoNext.getStamp() == parked.predSt + 2);

  // The parked window's unlink CAS misses, whatever got rebuilt under it.
  CHECK_FALSE(n3->infoNext.compareAndSet(parked.curr, list.tailNode(),
                                         parked.predSt, parked.predSt + 2));
  CHECK(list.contains(4));
  CHECK(list.contains(5));
}

TEST_CASE("contains treats a marked node as absent") {
  LfList list;
  list.add(4);
  LFNode* n4 = nodeWithKey(list, 4);
  CHECK(list.contains(4));
  markNode(n4);  // logically deleted but still reachable
  CHECK_FALSE(list.contains(4));
}

TEST_CASE("pooled node is reused and returned on duplicate add") {
  LfList list;
  list.add(5);
  list.remove(5);  // pool: one node
  const auto before = gclist::alloc_stats::consolidate();
  CHECK(list.add(5));  // reuses the pooled node
  const auto mid = gclist::alloc_stats::consolidate();
  CHECK(mid.nodeAllocs == before.nodeAllocs);

  list.add(9);     // pool is empty here, so this allocates
  list.remove(9);  // pool: one node again
  const auto repooled = gclist::alloc_stats::consolidate();
  CHECK_FALSE(list.add(5));  // duplicate: the drawn node goes straight back
  const auto after = gclist::alloc_stats::consolidate();
  CHECK(after.nodeAllocs == repooled.nodeAllocs);
  CHECK(after.nodeFrees == repooled.nodeFrees);

  // Pool size restored; the returned node is odd again.
  LFNode* restored = list.pool().get();
  REQUIRE(restored != nullptr);
  CHECK(LfList::isMarked(restored->infoNext.getStamp()));
  CHECK(list.pool().get() == nullptr);
  list.pool().set(restored);
}

TEST_CASE("duplicate add with an empty pool releases the fresh node") {
  LfList list;
  list.add(3);
  REQUIRE(list.pool().get() == nullptr);
  const auto before = gclist::alloc_stats::consolidate();
  CHECK_FALSE(list.add(3));
  const auto after = gclist::alloc_stats::consolidate();
  CHECK(after.nodeAllocs == before.nodeAllocs + 1);
  CHECK(after.nodeFrees == before.nodeFrees + 1);  // released, counter decremented
}

TEST_CASE("two threads adding the same key: exactly one wins") {
  for (int round = 0; round < 150; ++round) {
    LfList list;
    std::atomic<int> ready{0};
    bool r1 = false;
    bool r2 = false;
    std::thread t1([&] {
      ready.fetch_add(1);
      while (ready.load() < 2) {
      }
      r1 = list.add(5);
    });
    std::thread t2([&] {
      ready.fetch_add(1);
      while (ready.load() < 2) {
      }
      r2 = list.add(5);
    });
    t1.join();
    t2.join();
    CHECK(r1 != r2);
    CHECK(list.keys() == std::vector<std::int64_t>{5});
  }
}

TEST_CASE("two threads removing the same key: exactly one wins") {
  for (int round = 0; round < 150; ++round) {
    LfList list;
    list.add(5);
    std::atomic<int> ready{0};
    bool r1 = false;
    bool r2 = false;
    std::thread t1([&] {
      ready.fetch_add(1);
      while (ready.load() < 2) {
      }
      r1 = list.remove(5);
    });
    std::thread t2([&] {
      ready.fetch_add(1);
      while (ready.load() < 2) {
      }
      r2 = list.remove(5);
    });
    t1.join();
    t2.join();
    CHECK(r1 != r2);
    CHECK(list.keys().empty());
  }
}

TEST_CASE("adjacent concurrent removes both succeed and pool once") {
  for (int round = 0; round < 150; ++round) {
    GCLFList<CountingPool<LFNode>> list;
    list.add(3);
    list.add(5);
    LFNode* n3 = nodeWithKey(list, 3);
    LFNode* n5 = nodeWithKey(list, 5);

    std::atomic<int> ready{0};
    bool r3 = false;
    bool r5 = false;
    std::thread t1([&] {
      ready.fetch_add(1);
      while (ready.load() < 2) {
      }
      r3 = list.remove(3);
    });
    std::thread t2([&] {
      ready.fetch_add(1);
      while (ready.load() < 2) {
      }
      r5 = list.remove(5);
    });
    t1.join();
    t2.join();

    CHECK(r3);
    CHECK(r5);
    CHECK(list.keys().empty());
    CHECK(list.pool().setCountFor(n3) == 1);
    CHECK(list.pool().setCountFor(n5) == 1);
  }
}

TEST_CASE("single-threaded runs match the sequential oracle") {
  GCLFList<TwoLockQueuePool<LFNode>> list;
  SequentialSetOracle oracle;
  gclist::bench::WorkloadStream stream(42, 0, {20, 40, 40}, 32);
  for (int i = 0; i < 4000; ++i) {
    const auto draw = stream.next();
    switch (draw.op) {
      case gclist::SetOp::Contains:
        CHECK(list.contains(draw.key) == oracle.contains(draw.key));
        break;
      case gclist::SetOp::Add:
        CHECK(list.add(draw.key) == oracle.add(draw.key));
        break;
      case gclist::SetOp::Remove:
        CHECK(list.remove(draw.key) == oracle.remove(draw.key));
        break;
    }
  }
  const auto keys = list.keys();
  CHECK(std::vector<std::int64_t>(oracle.contents().begin(), oracle.contents().end()) ==
        keys);
}

// Tiny key space + heavy churn + oversubscribed threads: nodes cycle through
// remove/pool/recycle constantly while traversals sit parked on stale hops.
TEST_CASE("revival churn keeps the structure intact") {
  LfList list;
  std::vector<std::thread> threads;
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([&, t] {
      gclist::bench::WorkloadStream stream(71, t, {5, 50, 45}, 4);
      for (int i = 0; i < 30000; ++i) {
        const auto draw = stream.next();
        switch (draw.op) {
          case gclist::SetOp::Contains: list.contains(draw.key); break;
          case gclist::SetOp::Add: list.add(draw.key); break;
          case gclist::SetOp::Remove: list.remove(draw.key); break;
        }
      }
    });
  }
  for (auto& t : threads) t.join();

  std::vector<std::int64_t> keys;
  for (LFNode* n = list.headNode()->infoNext.getReference(); n != list.tailNode();
       n = n->infoNext.getReference()) {
    CHECK_FALSE(LfList::isMarked(n->infoNext.getStamp()));
    keys.push_back(n->key.load());
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  for (std::int64_t k : keys) CHECK(list.contains(k));
}

TEST_CASE("quiescent parity: reachable stamps even, pooled stamps odd") {
  LfList list;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      gclist::bench::WorkloadStream stream(5, t, {10, 45, 45}, 24);
      for (int i = 0; i < 8000; ++i) {
        const auto draw = stream.next();
        switch (draw.op) {
          case gclist::SetOp::Contains: list.contains(draw.key); break;
          case gclist::SetOp::Add: list.add(draw.key); break;
          case gclist::SetOp::Remove: list.remove(draw.key); break;
        }
      }
    });
  }
  for (auto& t : threads) t.join();

  std::vector<std::int64_t> keys;
  for (LFNode* n = list.headNode()->infoNext.getReference(); n != list.tailNode();
       n = n->infoNext.getReference()) {
    CHECK_FALSE(LfList::isMarked(n->infoNext.getStamp()));
    keys.push_back(n->key.load());
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());

  std::vector<LFNode*> pooled;
  while (LFNode* n = list.pool().get()) pooled.push_back(n);
  for (LFNode* n : pooled) {
    CHECK(LfList::isMarked(n->infoNext.getStamp()));
    list.pool().set(n);
  }
}
