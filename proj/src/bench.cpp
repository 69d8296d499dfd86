#include "gclist/bench.hpp"

#include <atomic>
#include <barrier>
#include <charconv>
#include <chrono>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "gclist/alloc_stats.hpp"

namespace gclist::bench {

std::optional<WorkloadMix> WorkloadMix::parse(std::string_view text) {
  int parts[3];
  std::size_t begin = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(':', begin) : text.size();
    if (end == std::string_view::npos) return std::nullopt;
    const auto* first = text.data() + begin;
    const auto* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, parts[i]);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    begin = end + 1;
  }
  WorkloadMix mix{parts[0], parts[1], parts[2]};
  if (!mix.valid()) return std::nullopt;
  return mix;
}

namespace {

void validateConfig(const RunConfig& config) {
  if (config.threads < 1) throw std::invalid_argument("run: threads must be >= 1");
  const bool durationMode = config.seconds > 0;
  const bool opsMode = config.totalOps > 0;
  if (durationMode == opsMode) {
    throw std::invalid_argument("run: exactly one of --seconds and --ops must be set");
  }
  if (config.keyRange < 1) throw std::invalid_argument("run: key range must be >= 1");
  if (!config.mix.valid()) {
    throw std::invalid_argument("run: operation mix percentages must sum to 100");
  }
}

struct alignas(64) PaddedCounter {
  std::atomic<std::uint64_t> value{0};
};

}  // namespace

RunReport runBenchmark(const RunConfig& config) {
  validateConfig(config);
  using Clock = std::chrono::steady_clock;

  const auto before = alloc_stats::consolidate();
  auto set = makeSet(config.impl);

  if (config.prefill > 0) {
    WorkloadStream stream(config.seed, -1, WorkloadMix{0, 100, 0}, config.keyRange);
    for (std::uint64_t i = 0; i < config.prefill; ++i) set->add(stream.next().key);
  }

  const bool durationMode = config.seconds > 0;
  const int threads = config.threads;
  std::atomic<bool> stop{false};
  std::atomic<int> running{threads};
  std::vector<PaddedCounter> progress(threads);
  std::vector<OpTally> tallies(threads);
  std::barrier startLine(threads + 1);

  auto worker = [&](int tid) {
    WorkloadStream stream(config.seed, tid, config.mix, config.keyRange);
    // Ops mode splits the budget across workers; the remainder goes to the
    // lowest thread ids.
    std::uint64_t quota = 0;
    if (!durationMode) {
      quota = config.totalOps / threads +
              (static_cast<std::uint64_t>(tid) < config.totalOps % threads ? 1 : 0);
    }
    OpTally tally;
    startLine.arrive_and_wait();
    std::uint64_t done = 0;
    while (true) {
      if (durationMode) {
        if (stop.load(std::memory_order_relaxed)) break;
      } else if (done >= quota) {
        break;
      }
      const auto draw = stream.next();
      switch (draw.op) {
        case SetOp::Contains:
          ++tally.containsOps;
          if (set->contains(draw.key)) ++tally.containsHits;
          break;
        case SetOp::Add:
          ++tally.addOps;
          if (set->add(draw.key)) ++tally.addHits;
          break;
        case SetOp::Remove:
          ++tally.removeOps;
          if (set->remove(draw.key)) ++tally.removeHits;
          break;
      }
      ++done;
      progress[tid].value.store(done, std::memory_order_relaxed);
    }
    tallies[tid] = tally;
    running.fetch_sub(1, std::memory_order_relaxed);
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);

  startLine.arrive_and_wait();
  const auto t0 = Clock::now();

  // The orchestration thread only keeps time and watches progress; the stall
  // gap is the time between observations of an unchanged global op count.
  std::uint64_t maxStallMs = 0;
  {
    std::uint64_t lastSum = 0;
    auto lastChange = t0;
    while (running.load(std::memory_order_relaxed) > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      const auto now = Clock::now();
      if (durationMode && !stop.load(std::memory_order_relaxed) &&
          std::chrono::duration<double>(now - t0).count() >= config.seconds) {
        stop.store(true, std::memory_order_relaxed);
      }
      std::uint64_t sum = 0;
      for (const auto& counter : progress) {
        sum += counter.value.load(std::memory_order_relaxed);
      }
      if (sum != lastSum) {
        lastSum = sum;
        lastChange = now;
      } else {
        const auto stall = std::chrono::duration_cast<std::chrono::milliseconds>(
                               now - lastChange)
                               .count();
        maxStallMs = std::max<std::uint64_t>(maxStallMs, static_cast<std::uint64_t>(stall));
      }
    }
  }
  for (auto& t : pool) t.join();
  const auto t1 = Clock::now();

  RunReport report;
  report.impl = config.impl;
  report.threads = threads;
  report.elapsedSeconds = std::chrono::duration<double>(t1 - t0).count();
  for (const auto& tally : tallies) {
    report.tally.containsOps += tally.containsOps;
    report.tally.addOps += tally.addOps;
    report.tally.removeOps += tally.removeOps;
    report.tally.containsHits += tally.containsHits;
    report.tally.addHits += tally.addHits;
    report.tally.removeHits += tally.removeHits;
  }
  report.totalOps = report.tally.total();
  report.opsPerSec =
      report.elapsedSeconds > 0 ? static_cast<double>(report.totalOps) / report.elapsedSeconds : 0;
  report.maxStallMs = maxStallMs;

  const auto after = alloc_stats::consolidate();
  report.allocNet = after.nodesNet() - before.nodesNet();
  return report;
}

double compareMemory(const RunConfig& config, const RunConfig& baseline) {
  if (baseline.impl != ImplKind::HandOverHand) {
    throw std::invalid_argument("compare-memory: baseline must be hoh");
  }
  RunConfig expected = config;
  expected.impl = baseline.impl;
  if (expected.threads != baseline.threads || expected.seconds != baseline.seconds ||
      expected.totalOps != baseline.totalOps || expected.keyRange != baseline.keyRange ||
      expected.seed != baseline.seed || expected.prefill != baseline.prefill ||
      expected.mix.containsPct != baseline.mix.containsPct ||
      expected.mix.addPct != baseline.mix.addPct ||
      expected.mix.removePct != baseline.mix.removePct) {
    throw std::invalid_argument(
        "compare-memory: configs must differ only in the implementation");
  }
  const RunReport a = runBenchmark(config);
  const RunReport b = runBenchmark(baseline);
  if (b.allocNet == 0) {
    throw std::runtime_error(
        "compare-memory: baseline net allocation is zero; ratio undefined");
  }
  return static_cast<double>(a.allocNet) / static_cast<double>(b.allocNet);
}

void writeCsv(std::ostream& out, const CsvTable& table) {
  out << "Threads";
  for (ImplKind impl : table.impls) out << ',' << implColumnName(impl);
  out << '\n';
  for (std::size_t row = 0; row < table.threadCounts.size(); ++row) {
    out << table.threadCounts[row];
    for (std::size_t col = 0; col < table.impls.size(); ++col) {
      out << ',' << table.cells[row][col];
    }
    out << '\n';
  }
}

CsvTable readCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  std::istringstream header(line);
  std::string field;
  if (!std::getline(header, field, ',') || field != "Threads") {
    throw std::runtime_error("csv: header must start with Threads");
  }
  while (std::getline(header, field, ',')) {
    bool known = false;
    for (ImplKind impl : kAllImpls) {
      if (implColumnName(impl) == field) {
        table.impls.push_back(impl);
        known = true;
        break;
      }
    }
    if (!known) throw std::runtime_error("csv: unknown column " + field);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw std::runtime_error("csv: bad row");
    table.threadCounts.push_back(std::stoi(cell));
    std::vector<std::uint64_t> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stoull(cell));
    if (values.size() != table.impls.size()) {
      throw std::runtime_error("csv: row width does not match header");
    }
    table.cells.push_back(std::move(values));
  }
  return table;
}

}  // namespace gclist::bench
