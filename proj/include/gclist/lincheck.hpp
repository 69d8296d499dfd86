#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

#include "gclist/set_adapter.hpp"
#include "gclist/workload.hpp"

namespace gclist::lincheck {

enum class EventKind { Invocation, Response };

struct HistoryEvent {
  std::uint64_t seq;  // global order index from one atomic counter
  int threadId;
  EventKind kind;
  SetOp op;
  std::int64_t key;
  std::optional<bool> result;  // responses only
};

/// Events sorted by seq. Every invocation is expected to have a matching later
/// response on the same thread; a trailing unmatched invocation is treated as
/// a pending operation by the checker.
using History = std::vector<HistoryEvent>;

/// Reference single-threaded set the checker replays candidate orders on.
class SequentialSetOracle {
 public:
  bool add(std::int64_t key) { return contents_.insert(key).second; }
  bool remove(std::int64_t key) { return contents_.erase(key) > 0; }
  bool contains(std::int64_t key) const { return contents_.count(key) > 0; }

  bool apply(SetOp op, std::int64_t key) {
    switch (op) {
      case SetOp::Contains: return contains(key);
      case SetOp::Add: return add(key);
      case SetOp::Remove: return remove(key);
    }
    return false;
  }

  const std::set<std::int64_t>& contents() const { return contents_; }

 private:
  std::set<std::int64_t> contents_;
};

/// Desk-scale recording bounds; the brute-force checker is exhaustive only
/// within them.
struct RecordConfig {
  ImplKind impl = ImplKind::GclbLbQueue;
  int threads = 2;           // 1..4
  int opsPerThread = 10;     // threads * opsPerThread <= 40
  std::int64_t keyRange = 8; // 1..8
  std::uint64_t seed = 1;
  bench::WorkloadMix mix{34, 33, 33};
};

/// Runs the configured workload against a fresh instance of the implementation
/// and returns the complete recorded history. Throws std::invalid_argument on
/// out-of-bounds configs and std::runtime_error if the history comes back
/// incomplete.
History record(const RecordConfig& config);

struct WitnessStep {
  int threadId;
  SetOp op;
  std::int64_t key;
  bool result;
};

struct Verdict {
  enum class Outcome { Linearizable, NotLinearizable, Inconclusive };

  Outcome outcome = Outcome::Inconclusive;
  /// Linearizable: one sequential order that respects real time and replays
  /// correctly on the oracle.
  std::vector<WitnessStep> witness;
  /// NotLinearizable: shortest event prefix that already has no valid order.
  History failingPrefix;
  /// States explored before the search finished (or gave up).
  std::uint64_t statesExplored = 0;
};

/// Exhaustive search over all real-time-respecting orders, with memoization on
/// (linearized-set, oracle-state). A budget overrun yields Inconclusive, never
/// a false verdict.
Verdict isLinearizable(const History& history,
                       std::uint64_t stateBudget = 50'000'000);

/// Line format: `seq threadId kind op key result`, kind in {inv, res}, result
/// in {true, false} for responses and `-` for invocations.
void writeHistory(std::ostream& out, const History& history);
History readHistory(std::istream& in);

}  // namespace gclist::lincheck
