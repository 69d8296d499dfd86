#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "gclist/set_adapter.hpp"

namespace gclist::bench {

/// Operation mix as percentages summing to 100.
struct WorkloadMix {
  int containsPct = 90;
  int addPct = 9;
  int removePct = 1;

  bool valid() const {
    return containsPct >= 0 && addPct >= 0 && removePct >= 0 &&
           containsPct + addPct + removePct == 100;
  }

  /// Parses "C:A:R", e.g. "90:9:1".
  static std::optional<WorkloadMix> parse(std::string_view text);
};

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic per-thread stream of (operation, key) draws: the same
/// (seed, threadId) always yields the same sequence. Keys are uniform over
/// [0, keyRange).
class WorkloadStream {
 public:
  struct Draw {
    SetOp op;
    std::int64_t key;
  };

  WorkloadStream(std::uint64_t seed, int threadId, WorkloadMix mix,
                 std::int64_t keyRange)
      : rng_(deriveSeed(seed, threadId)), mix_(mix), keyRange_(keyRange) {}

  Draw next() {
    const auto roll = static_cast<int>(rng_.next() % 100);
    SetOp op;
    if (roll < mix_.containsPct) {
      op = SetOp::Contains;
    } else if (roll < mix_.containsPct + mix_.addPct) {
      op = SetOp::Add;
    } else {
      op = SetOp::Remove;
    }
    const auto key = static_cast<std::int64_t>(rng_.next() % static_cast<std::uint64_t>(keyRange_));
    return Draw{op, key};
  }

  static std::uint64_t deriveSeed(std::uint64_t seed, int threadId) {
    SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ull *
                             static_cast<std::uint64_t>(threadId + 1)));
    return mixer.next();
  }

 private:
  SplitMix64 rng_;
  WorkloadMix mix_;
  std::int64_t keyRange_;
};

}  // namespace gclist::bench
