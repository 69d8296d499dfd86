// Benchmark driver for the concurrent set implementations.
//
//   gclist-bench run --impl gclb-lb,gclf-lf --threads 2,4,8 --seconds 10
//       --mix 90:9:1 --key-range 1024 --seed 7 --csv out.csv
//   gclist-bench compare-memory --impl gclb-lb --baseline hoh --ops 100000
//       --threads 8 --mix 10:45:45 --key-range 64 --seed 7
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gclist/bench.hpp"

namespace {

using gclist::ImplKind;
using gclist::bench::CsvTable;
using gclist::bench::RunConfig;
using gclist::bench::RunReport;
using gclist::bench::WorkloadMix;

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

void printReport(const RunReport& report) {
  std::printf("%-12s threads=%-3d ops=%-10llu ops/sec=%-12.0f allocNet=%lld stall=%llums\n",
              std::string(gclist::implId(report.impl)).c_str(), report.threads,
              static_cast<unsigned long long>(report.totalOps), report.opsPerSec,
              static_cast<long long>(report.allocNet),
              static_cast<unsigned long long>(report.maxStallMs));
}

int runCommand(const std::string& implList, const std::string& threadsList,
               double seconds, std::uint64_t ops, const std::string& mixText,
               std::int64_t keyRange, std::uint64_t seed, std::uint64_t prefill,
               const std::string& csvPath) {
  const auto mix = WorkloadMix::parse(mixText);
  if (!mix) {
    std::cerr << "error: --mix must be C:A:R percentages summing to 100\n";
    return 2;
  }
  std::vector<ImplKind> impls;
  for (const auto& id : splitList(implList)) {
    const auto kind = gclist::parseImplId(id);
    if (!kind) {
      std::cerr << "error: unknown implementation '" << id << "'\n";
      return 2;
    }
    impls.push_back(*kind);
  }
  std::vector<int> threadCounts;
  for (const auto& t : splitList(threadsList)) {
    try {
      threadCounts.push_back(std::stoi(t));
    } catch (const std::exception&) {
      std::cerr << "error: bad thread count '" << t << "'\n";
      return 2;
    }
  }
  if (impls.empty() || threadCounts.empty()) {
    std::cerr << "error: --impl and --threads must be non-empty\n";
    return 2;
  }

  CsvTable table;
  table.impls = impls;
  table.threadCounts = threadCounts;
  for (int threads : threadCounts) {
    std::vector<std::uint64_t> row;
    for (ImplKind impl : impls) {
      RunConfig config;
      config.impl = impl;
      config.threads = threads;
      config.seconds = seconds;
      config.totalOps = ops;
      config.keyRange = keyRange;
      config.seed = seed;
      config.prefill = prefill;
      config.mix = *mix;
      RunReport report;
      try {
        report = gclist::bench::runBenchmark(config);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
      printReport(report);
      row.push_back(report.totalOps);
    }
    table.cells.push_back(std::move(row));
  }

  if (!csvPath.empty()) {
    std::ofstream out(csvPath);
    if (!out) {
      std::cerr << "error: cannot open " << csvPath << " for writing\n";
      return 1;
    }
    gclist::bench::writeCsv(out, table);
    if (!out.good()) {
      std::cerr << "error: failed writing " << csvPath << '\n';
      return 1;
    }
  }
  return 0;
}

int compareMemoryCommand(const std::string& implId, const std::string& baselineId,
                         double seconds, std::uint64_t ops, const std::string& mixText,
                         std::int64_t keyRange, std::uint64_t seed,
                         std::uint64_t prefill, int threads) {
  const auto mix = WorkloadMix::parse(mixText);
  if (!mix) {
    std::cerr << "error: --mix must be C:A:R percentages summing to 100\n";
    return 2;
  }
  const auto impl = gclist::parseImplId(implId);
  if (!impl) {
    std::cerr << "error: unknown implementation '" << implId << "'\n";
    return 2;
  }
  const auto baseline = gclist::parseImplId(baselineId);
  if (!baseline || *baseline != ImplKind::HandOverHand) {
    std::cerr << "error: --baseline must be hoh\n";
    return 2;
  }
  RunConfig config;
  config.impl = *impl;
  config.threads = threads;
  config.seconds = seconds;
  config.totalOps = ops;
  config.keyRange = keyRange;
  config.seed = seed;
  config.prefill = prefill;
  config.mix = *mix;
  RunConfig base = config;
  base.impl = *baseline;
  try {
    const double ratio = gclist::bench::compareMemory(config, base);
    std::printf("node-count ratio (%s / %s) = %.6f\n", implId.c_str(),
                baselineId.c_str(), ratio);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concurrent-set throughput and memory benchmark"};
  app.require_subcommand(1);

  std::string implList;
  std::string threadsList = "1";
  double seconds = 0;
  std::uint64_t ops = 0;
  std::string mixText = "90:9:1";
  std::int64_t keyRange = 1024;
  std::uint64_t seed = 1;
  std::uint64_t prefill = 0;
  std::string csvPath;

  auto* run = app.add_subcommand("run", "Timed or op-counted throughput runs");
  run->add_option("--impl", implList,
                  "Comma list of gclb-lb|gclb-lf|gclf-lb|gclf-lf|hoh|lazy-leaky")
      ->required();
  run->add_option("--threads", threadsList, "Comma list of worker counts");
  run->add_option("--seconds", seconds, "Wall-clock duration per run");
  run->add_option("--ops", ops, "Total operation budget per run");
  run->add_option("--mix", mixText, "contains:add:remove percentages");
  run->add_option("--key-range", keyRange, "Keys are drawn from [0, K)");
  run->add_option("--seed", seed, "Workload seed");
  run->add_option("--prefill", prefill, "Adds performed before the timed window");
  run->add_option("--csv", csvPath, "Write a Threads-by-implementation CSV");

  std::string cmImpl;
  std::string cmBaseline = "hoh";
  int cmThreads = 1;

  auto* cm = app.add_subcommand("compare-memory",
                                "Node-count ratio of an implementation vs hoh");
  cm->add_option("--impl", cmImpl, "Implementation under test")->required();
  cm->add_option("--baseline", cmBaseline, "Baseline implementation (hoh)");
  cm->add_option("--threads", cmThreads, "Worker count");
  cm->add_option("--seconds", seconds, "Wall-clock duration per run");
  cm->add_option("--ops", ops, "Total operation budget per run");
  cm->add_option("--mix", mixText, "contains:add:remove percentages");
  cm->add_option("--key-range", keyRange, "Keys are drawn from [0, K)");
  cm->add_option("--seed", seed, "Workload seed");
  cm->add_option("--prefill", prefill, "Adds performed before the timed window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) {
    return runCommand(implList, threadsList, seconds, ops, mixText, keyRange, seed,
                      prefill, csvPath);
  }
  return compareMemoryCommand(cmImpl, cmBaseline, seconds, ops, mixText, keyRange,
                              seed, prefill, cmThreads);
}
