#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gclist/set_adapter.hpp"
#include "gclist/workload.hpp"

namespace gclist::bench {

/// One timed or op-counted run. Exactly one of seconds/totalOps must be set.
struct RunConfig {
  ImplKind impl = ImplKind::GclbLbQueue;
  int threads = 1;
  double seconds = 0;        // wall-clock mode when > 0
  std::uint64_t totalOps = 0;  // fixed-op-count mode when > 0
  std::int64_t keyRange = 1024;  // keys drawn uniformly from [0, keyRange)
  std::uint64_t seed = 1;
  std::uint64_t prefill = 0;  // adds performed before the timed window
  WorkloadMix mix;
};

struct OpTally {
  std::uint64_t containsOps = 0;
  std::uint64_t addOps = 0;
  std::uint64_t removeOps = 0;
  std::uint64_t containsHits = 0;
  std::uint64_t addHits = 0;  // successful adds
  std::uint64_t removeHits = 0;

  std::uint64_t total() const { return containsOps + addOps + removeOps; }
};

struct RunReport {
  ImplKind impl = ImplKind::GclbLbQueue;
  int threads = 0;
  double elapsedSeconds = 0;
  std::uint64_t totalOps = 0;
  double opsPerSec = 0;
  /// Net list-node allocations (allocations - releases) across the whole run,
  /// consolidated over all worker threads. Sentinels included.
  std::int64_t allocNet = 0;
  OpTally tally;
  /// Longest observed gap without any thread completing an operation.
  std::uint64_t maxStallMs = 0;
};

/// Spawns the workers, releases them together through a barrier, runs the mix
/// for the configured duration or op budget, joins, and consolidates counters.
/// Throws std::invalid_argument on a malformed config.
RunReport runBenchmark(const RunConfig& config);

/// Node-count ratio of `config` versus the hand-over-hand baseline under the
/// identical workload. `baseline` must match `config` in everything but the
/// implementation, which must be hoh. Throws std::runtime_error when the
/// baseline's net allocation is zero.
double compareMemory(const RunConfig& config, const RunConfig& baseline);

/// Rows are thread counts, columns are implementations, cells are completed
/// operation counts.
struct CsvTable {
  std::vector<int> threadCounts;
  std::vector<ImplKind> impls;
  std::vector<std::vector<std::uint64_t>> cells;  // [row][col]
};

void writeCsv(std::ostream& out, const CsvTable& table);
CsvTable readCsv(std::istream& in);

}  // namespace gclist::bench
