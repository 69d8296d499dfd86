#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "doctest.h"
#include "gclist/alloc_stats.hpp"
#include "gclist/pool.hpp"

using gclist::LockFreeQueuePool;
using gclist::TwoLockQueuePool;

namespace {
struct Payload {
  int id = 0;
};
}  // namespace

TEST_CASE_TEMPLATE("empty pool returns null", PoolT, TwoLockQueuePool<Payload>,
                   LockFreeQueuePool<Payload>) {
  PoolT pool;
  CHECK(pool.get() == nullptr);
  CHECK(pool.residualSize() == 0);
}

TEST_CASE_TEMPLATE("set then get round-trips one node", PoolT,
                   TwoLockQueuePool<Payload>, LockFreeQueuePool<Payload>) {
  PoolT pool;
  Payload a;
  pool.set(&a);
  CHECK(pool.residualSize() == 1);
  CHECK(pool.get() == &a);
  CHECK(pool.get() == nullptr);
}

TEST_CASE_TEMPLATE("null set is a no-op", PoolT, TwoLockQueuePool<Payload>,
                   LockFreeQueuePool<Payload>) {
  PoolT pool;
  pool.set(nullptr);
  CHECK(pool.residualSize() == 0);
  CHECK(pool.setCalls() == 0);
  CHECK(pool.get() == nullptr);
}

TEST_CASE_TEMPLATE("FIFO order for a single producer", PoolT,
                   TwoLockQueuePool<Payload>, LockFreeQueuePool<Payload>) {
  PoolT pool;
  Payload a, b, c;
  pool.set(&a);
  pool.set(&b);
  pool.set(&c);
  CHECK(pool.get() == &a);
  CHECK(pool.get() == &b);
  CHECK(pool.get() == &c);
  CHECK(pool.get() == nullptr);
}

TEST_CASE_TEMPLATE("wrapper allocations are tracked apart from nodes", PoolT,
                   TwoLockQueuePool<Payload>, LockFreeQueuePool<Payload>) {
  const auto before = gclist::alloc_stats::consolidate();
  {
    PoolT pool;
    Payload a, b;
    pool.set(&a);
    pool.set(&b);
    pool.get();
    pool.get();
  }
  const auto after = gclist::alloc_stats::consolidate();
  CHECK(after.wrapperAllocs > before.wrapperAllocs);
  CHECK(after.wrappersNet() == before.wrappersNet());  // all freed at teardown
  CHECK(after.nodesNet() == before.nodesNet());        // payloads untouched
}

// N threads each set one distinct node; N gets return a permutation of them.
TEST_CASE_TEMPLATE("concurrent sets and gets conserve the multiset", PoolT,
                   TwoLockQueuePool<Payload>, LockFreeQueuePool<Payload>) {
  constexpr int kProducers = 4;
  constexpr int kPerProducer = 2000;

  PoolT pool;
  std::vector<Payload> nodes(kProducers * kPerProducer);
  for (int i = 0; i < kProducers * kPerProducer; ++i) nodes[i].id = i;

  std::vector<std::thread> producers;
  for (int p = 0; p < kProducers; ++p) {
    producers.emplace_back([&, p] {
      for (int i = 0; i < kPerProducer; ++i) {
        pool.set(&nodes[p * kPerProducer + i]);
      }
    });
  }

  std::vector<std::vector<Payload*>> consumed(kProducers);
  std::atomic<int> taken{0};
  std::vector<std::thread> consumers;
  for (int c = 0; c < kProducers; ++c) {
    consumers.emplace_back([&, c] {
      while (taken.load(std::memory_order_relaxed) < kProducers * kPerProducer) {
        Payload* node = pool.get();
        if (node != nullptr) {
          consumed[c].push_back(node);
          taken.fetch_add(1, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& t : producers) t.join();
  for (auto& t : consumers) t.join();

  std::vector<Payload*> all;
  for (const auto& chunk : consumed) all.insert(all.end(), chunk.begin(), chunk.end());
  REQUIRE(all.size() == nodes.size());
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());  // no duplicates
  CHECK(pool.get() == nullptr);
  CHECK(pool.setCalls() == nodes.size());
  CHECK(pool.getHits() == nodes.size());
}

// Helping keeps tail honest: once every set() has returned, tail points at the
// true last wrapper even when its enqueuer lost the tail-swing CAS.
TEST_CASE("lock-free pool tail is current at quiescence") {
  LockFreeQueuePool<Payload> pool;
  std::vector<Payload> nodes(4000);
  std::vector<std::thread> producers;
  for (int p = 0; p < 4; ++p) {
    producers.emplace_back([&, p] {
      for (int i = 0; i < 1000; ++i) pool.set(&nodes[p * 1000 + i]);
    });
  }
  for (auto& t : producers) t.join();
  CHECK(pool.debugTailCurrent());
  CHECK(pool.residualSize() == 4000);
}

// get racing a single set yields either null or the node; the complement shows
// up at quiescence.
TEST_CASE_TEMPLATE("get racing set never loses the element", PoolT,
                   TwoLockQueuePool<Payload>, LockFreeQueuePool<Payload>) {
  for (int round = 0; round < 300; ++round) {
    PoolT pool;
    Payload a;
    Payload* got = nullptr;
    std::thread producer([&] { pool.set(&a); });
    std::thread consumer([&] { got = pool.get(); });
    producer.join();
    consumer.join();
    if (got == nullptr) {
      CHECK(pool.residualSize() == 1);
      CHECK(pool.get() == &a);
    } else {
      CHECK(got == &a);
      CHECK(pool.residualSize() == 0);
    }
  }
}

TEST_CASE("conservation identity holds at quiescence") {
  LockFreeQueuePool<Payload> pool;
  std::vector<Payload> nodes(100);
  for (auto& n : nodes) pool.set(&n);
  for (int i = 0; i < 40; ++i) pool.get();
  CHECK(pool.setCalls() - pool.getHits() == pool.residualSize());
}
