#include "gclist/lincheck.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

namespace gclist::lincheck {

namespace {

constexpr int kMaxThreads = 4;
constexpr int kMaxOps = 40;
constexpr std::int64_t kMaxKeyRange = 8;

void validateConfig(const RecordConfig& config) {
  if (config.threads < 1 || config.threads > kMaxThreads) {
    throw std::invalid_argument("record: threads must be in 1..4");
  }
  if (config.opsPerThread < 1 ||
      config.threads * config.opsPerThread > kMaxOps) {
    throw std::invalid_argument("record: at most 40 operations per history");
  }
  if (config.keyRange < 1 || config.keyRange > kMaxKeyRange) {
    throw std::invalid_argument("record: key range must be in 1..8");
  }
  if (!config.mix.valid()) {
    throw std::invalid_argument("record: operation mix must sum to 100");
  }
}

}  // namespace

History record(const RecordConfig& config) {
  validateConfig(config);
  auto set = makeSet(config.impl);
  std::atomic<std::uint64_t> seq{0};
  std::vector<std::vector<HistoryEvent>> buffers(config.threads);
  std::barrier start(config.threads);

  auto worker = [&](int tid) {
    bench::WorkloadStream stream(config.seed, tid, config.mix, config.keyRange);
    auto& events = buffers[tid];
    events.reserve(2 * static_cast<std::size_t>(config.opsPerThread));
    start.arrive_and_wait();
    for (int i = 0; i < config.opsPerThread; ++i) {
      const auto draw = stream.next();
      events.push_back({seq.fetch_add(1, std::memory_order_relaxed), tid,
                        EventKind::Invocation, draw.op, draw.key, std::nullopt});
      const bool result = set->apply(draw.op, draw.key);
      events.push_back({seq.fetch_add(1, std::memory_order_relaxed), tid,
                        EventKind::Response, draw.op, draw.key, result});
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(config.threads);
  for (int tid = 0; tid < config.threads; ++tid) threads.emplace_back(worker, tid);
  for (auto& t : threads) t.join();

  History history;
  std::size_t invocations = 0;
  std::size_t responses = 0;
  for (const auto& buffer : buffers) {
    for (const auto& event : buffer) {
      (event.kind == EventKind::Invocation ? invocations : responses)++;
      history.push_back(event);
    }
  }
  if (invocations != responses) {
    throw std::runtime_error("record: incomplete history (a thread crashed?)");
  }
  std::sort(history.begin(), history.end(),
            [](const HistoryEvent& a, const HistoryEvent& b) { return a.seq < b.seq; });
  return history;
}

namespace {

constexpr std::uint64_t kNoResponse = std::numeric_limits<std::uint64_t>::max();

struct OpRecord {
  std::uint64_t invokeSeq = 0;
  std::uint64_t responseSeq = kNoResponse;  // kNoResponse while pending
  int threadId = 0;
  SetOp op = SetOp::Contains;
  std::int64_t key = 0;
  std::optional<bool> result;
  int keyIndex = 0;
};

// Pairs invocations with their responses per thread; events on one thread must
// alternate inv/res. A trailing unmatched invocation stays pending.
std::vector<OpRecord> collectOps(const History& history) {
  std::map<int, std::size_t> openOp;  // threadId -> index into ops
  std::vector<OpRecord> ops;
  for (const auto& event : history) {
    if (event.kind == EventKind::Invocation) {
      if (openOp.count(event.threadId)) {
        throw std::invalid_argument("history: overlapping operations on one thread");
      }
      openOp[event.threadId] = ops.size();
      ops.push_back({event.seq, kNoResponse, event.threadId, event.op, event.key,
                     std::nullopt, 0});
    } else {
      auto it = openOp.find(event.threadId);
      if (it == openOp.end()) {
        throw std::invalid_argument("history: response without invocation");
      }
      OpRecord& op = ops[it->second];
      if (op.op != event.op || op.key != event.key) {
        throw std::invalid_argument("history: response does not match invocation");
      }
      if (!event.result.has_value()) {
        throw std::invalid_argument("history: response without result");
      }
      op.responseSeq = event.seq;
      op.result = event.result;
      openOp.erase(it);
    }
  }
  return ops;
}

struct SearchKey {
  std::uint64_t mask;
  std::uint64_t state;

  bool operator==(const SearchKey&) const = default;
};

struct SearchKeyHash {
  std::size_t operator()(const SearchKey& k) const {
    std::uint64_t h = k.mask * 0x9E3779B97F4A7C15ull;
    h ^= k.state + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class BudgetExceeded {};

class Searcher {
 public:
  Searcher(std::vector<OpRecord> ops, std::uint64_t budget)
      : ops_(std::move(ops)), budget_(budget) {
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (ops_[i].result.has_value()) completedMask_ |= bit(i);
    }
    indexKeys();
  }

  bool search() {
    return dfs(0, 0);
  }

  std::uint64_t statesExplored() const { return statesExplored_; }

  std::vector<WitnessStep> witness() const {
    std::vector<WitnessStep> steps;
    steps.reserve(chosen_.size());
    SequentialSetOracle oracle;
    for (std::size_t index : chosen_) {
      const OpRecord& op = ops_[index];
      steps.push_back({op.threadId, op.op, op.key, oracle.apply(op.op, op.key)});
    }
    return steps;
  }

 private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

  void indexKeys() {
    std::vector<std::int64_t> keys;
    for (const auto& op : ops_) keys.push_back(op.key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (keys.size() > 62) {
      throw std::invalid_argument("history: too many distinct keys for desk-scale check");
    }
    for (auto& op : ops_) {
      op.keyIndex = static_cast<int>(
          std::lower_bound(keys.begin(), keys.end(), op.key) - keys.begin());
    }
  }

  bool dfs(std::uint64_t mask, std::uint64_t state) {
    if ((mask & completedMask_) == completedMask_) return true;
    if (!visited_.insert(SearchKey{mask, state}).second) return false;
    if (++statesExplored_ > budget_) throw BudgetExceeded{};

    std::uint64_t minResponse = kNoResponse;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (!(mask & bit(i))) minResponse = std::min(minResponse, ops_[i].responseSeq);
    }
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (mask & bit(i)) continue;
      const OpRecord& op = ops_[i];
      // Only an operation that was invoked before every other outstanding
      // operation's response may be linearized next.
      if (op.invokeSeq > minResponse) continue;
      const std::uint64_t keyBit = std::uint64_t{1} << op.keyIndex;
      bool outcome;
      std::uint64_t nextState = state;
      switch (op.op) {
        case SetOp::Contains: outcome = (state & keyBit) != 0; break;
        case SetOp::Add:
          outcome = (state & keyBit) == 0;
          nextState |= keyBit;
          break;
        case SetOp::Remove:
          outcome = (state & keyBit) != 0;
          nextState &= ~keyBit;
          break;
        default: outcome = false; break;
      }
      if (op.result.has_value() && *op.result != outcome) continue;
      chosen_.push_back(i);
      if (dfs(mask | bit(i), nextState)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  std::vector<OpRecord> ops_;
  std::uint64_t budget_;
  std::uint64_t completedMask_ = 0;
  std::uint64_t statesExplored_ = 0;
  std::vector<std::size_t> chosen_;
  std::unordered_set<SearchKey, SearchKeyHash> visited_;
};

// Runs the search on one event prefix. Outcome only; no prefix minimization.
Verdict checkOnce(const History& events, std::uint64_t stateBudget) {
  auto ops = collectOps(events);
  if (ops.size() > 62) {
    throw std::invalid_argument("history: too many operations for desk-scale check");
  }
  Verdict verdict;
  Searcher searcher(std::move(ops), stateBudget);
  try {
    const bool ok = searcher.search();
    verdict.statesExplored = searcher.statesExplored();
    if (ok) {
      verdict.outcome = Verdict::Outcome::Linearizable;
      verdict.witness = searcher.witness();
    } else {
      verdict.outcome = Verdict::Outcome::NotLinearizable;
    }
  } catch (const BudgetExceeded&) {
    verdict.outcome = Verdict::Outcome::Inconclusive;
    verdict.statesExplored = searcher.statesExplored();
  }
  return verdict;
}

}  // namespace

Verdict isLinearizable(const History& history, std::uint64_t stateBudget) {
  Verdict verdict = checkOnce(history, stateBudget);
  if (verdict.outcome != Verdict::Outcome::NotLinearizable) return verdict;

  // Shrink to the shortest event prefix that already fails; operations whose
  // response lies beyond the cut count as pending.
  for (std::size_t len = 1; len <= history.size(); ++len) {
    History prefix(history.begin(), history.begin() + len);
    Verdict sub = checkOnce(prefix, stateBudget);
    if (sub.outcome == Verdict::Outcome::NotLinearizable) {
      verdict.failingPrefix = std::move(prefix);
      break;
    }
    if (sub.outcome == Verdict::Outcome::Inconclusive) break;
  }
  if (verdict.failingPrefix.empty()) verdict.failingPrefix = history;
  return verdict;
}

void writeHistory(std::ostream& out, const History& history) {
  for (const auto& event : history) {
    out << event.seq << ' ' << event.threadId << ' '
        << (event.kind == EventKind::Invocation ? "inv" : "res") << ' '
        << opName(event.op) << ' ' << event.key << ' ';
    if (event.result.has_value()) {
      out << (*event.result ? "true" : "false");
    } else {
      out << '-';
    }
    out << '\n';
  }
}

History readHistory(std::istream& in) {
  History history;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::istringstream fields(line);
    HistoryEvent event;
    std::string kind, op, result;
    if (!(fields >> event.seq >> event.threadId >> kind >> op >> event.key >> result)) {
      throw std::runtime_error("history line " + std::to_string(lineNo) + ": malformed");
    }
    if (kind == "inv") {
      event.kind = EventKind::Invocation;
    } else if (kind == "res") {
      event.kind = EventKind::Response;
    } else {
      throw std::runtime_error("history line " + std::to_string(lineNo) + ": bad kind");
    }
    const auto parsedOp = parseOpName(op);
    if (!parsedOp) {
      throw std::runtime_error("history line " + std::to_string(lineNo) + ": bad op");
    }
    event.op = *parsedOp;
    if (result == "true") {
      event.result = true;
    } else if (result == "false") {
      event.result = false;
    } else if (result == "-") {
      event.result = std::nullopt;
    } else {
      throw std::runtime_error("history line " + std::to_string(lineNo) + ": bad result");
    }
    history.push_back(event);
  }
  std::sort(history.begin(), history.end(),
            [](const HistoryEvent& a, const HistoryEvent& b) { return a.seq < b.seq; });
  return history;
}

}  // namespace gclist::lincheck
