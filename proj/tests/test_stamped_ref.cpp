#include <array>
#include <atomic>
#include <thread>
#include <vector>

#include "doctest.h"
#include "gclist/stamped_ref.hpp"

using gclist::AtomicStampedReference;

namespace {
struct Cellmate {
  int tag = 0;
};
}  // namespace

TEST_CASE("get returns the initialized pair") {
  Cellmate a;
  AtomicStampedReference<Cellmate> cell(&a, 0);
  const auto snap = cell.get();
  CHECK(snap.node == &a);
  CHECK(snap.stamp == 0);
  CHECK(cell.getReference() == &a);
  CHECK(cell.getStamp() == 0);
}

TEST_CASE("null reference is a legal pair") {
  AtomicStampedReference<Cellmate> cell(nullptr, 5);
  const auto snap = cell.get();
  CHECK(snap.node == nullptr);
  CHECK(snap.stamp == 5);
}

TEST_CASE("set installs both fields") {
  Cellmate a, b;
  AtomicStampedReference<Cellmate> cell(&a, 0);

  cell.set(&b, 1);
  CHECK(cell.get() == gclist::StampedSnapshot<Cellmate>{&b, 1});
  CHECK(cell.getStamp() == 1);

  cell.set(&b, 1);  // self-write
  CHECK(cell.get() == gclist::StampedSnapshot<Cellmate>{&b, 1});

  cell.set(nullptr, 3);
  CHECK(cell.get() == gclist::StampedSnapshot<Cellmate>{nullptr, 3});
}

TEST_CASE("compareAndSet matches both fields exactly") {
  Cellmate a, b, c;

  AtomicStampedReference<Cellmate> cell(&a, 0);
  CHECK(cell.compareAndSet(&a, &b, 0, 1));
  CHECK(cell.get() == gclist::StampedSnapshot<Cellmate>{&b, 1});

  cell.set(&a, 0);
  CHECK_FALSE(cell.compareAndSet(&a, &b, 7, 8));  // stamp mismatch
  CHECK(cell.get() == gclist::StampedSnapshot<Cellmate>{&a, 0});

  CHECK_FALSE(cell.compareAndSet(&c, &b, 0, 1));  // reference mismatch
  CHECK(cell.get() == gclist::StampedSnapshot<Cellmate>{&a, 0});
}

// Tag each legal pair uniquely (slot i pairs only with stamp i); any observed
// cross-pairing would be a torn read.
TEST_CASE("concurrent readers never observe a torn pair") {
  constexpr int kSlots = 64;
  constexpr int kWriters = 2;
  constexpr int kReaders = 2;
  constexpr int kIters = 40000;

  std::array<Cellmate, kSlots> slots{};
  AtomicStampedReference<Cellmate> cell(&slots[0], 0);
  std::atomic<bool> stop{false};
  std::atomic<int> violations{0};

  std::vector<std::thread> threads;
  for (int w = 0; w < kWriters; ++w) {
    threads.emplace_back([&, w] {
      std::uint64_t x = 0x243F6A8885A308D3ull + w;
      for (int i = 0; i < kIters; ++i) {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        const auto slot = x % kSlots;
        cell.set(&slots[slot], slot);
      }
    });
  }
  for (int r = 0; r < kReaders; ++r) {
    threads.emplace_back([&] {
      while (!stop.load(std::memory_order_relaxed)) {
        const auto snap = cell.get();
        if (snap.node != &slots[snap.stamp]) {
          violations.fetch_add(1, std::memory_order_relaxed);
        }
      }
    });
  }
  for (int w = 0; w < kWriters; ++w) threads[w].join();
  stop.store(true);
  for (int r = kWriters; r < kWriters + kReaders; ++r) threads[r].join();

  CHECK(violations.load() == 0);
}

TEST_CASE("exactly one of k racing compareAndSet calls wins") {
  constexpr int kThreads = 4;
  constexpr int kRounds = 200;

  Cellmate a;
  std::array<Cellmate, kThreads> winners{};

  for (int round = 0; round < kRounds; ++round) {
    AtomicStampedReference<Cellmate> cell(&a, 7);
    std::atomic<int> successes{0};
    std::atomic<int> ready{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t) {
      threads.emplace_back([&, t] {
        ready.fetch_add(1);
        while (ready.load() < kThreads) {
        }
        if (cell.compareAndSet(&a, &winners[t], 7, 8)) successes.fetch_add(1);
      });
    }
    for (auto& t : threads) t.join();
    REQUIRE(successes.load() == 1);
    CHECK(cell.getStamp() == 8);
  }
}
