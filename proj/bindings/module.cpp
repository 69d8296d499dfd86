#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gclist/bench.hpp"
#include "gclist/lincheck.hpp"
#include "gclist/set_adapter.hpp"

namespace py = pybind11;

namespace {

gclist::ImplKind implFromString(const std::string& id) {
  const auto kind = gclist::parseImplId(id);
  if (!kind) {
    throw std::invalid_argument("unknown implementation '" + id +
                                "'; expected one of gclb-lb, gclb-lf, gclf-lb, "
                                "gclf-lf, hoh, lazy-leaky");
  }
  return *kind;
}

gclist::bench::WorkloadMix mixFromTuple(const std::tuple<int, int, int>& mix) {
  gclist::bench::WorkloadMix out{std::get<0>(mix), std::get<1>(mix),
                                 std::get<2>(mix)};
  if (!out.valid()) {
    throw std::invalid_argument("mix percentages must be >= 0 and sum to 100");
  }
  return out;
}

class PySet {
 public:
  explicit PySet(const std::string& impl) : set_(gclist::makeSet(implFromString(impl))) {}

  bool add(std::int64_t key) { return set_->add(key); }
  bool remove(std::int64_t key) { return set_->remove(key); }
  bool contains(std::int64_t key) { return set_->contains(key); }
  std::vector<std::int64_t> keys() const { return set_->keys(); }
  std::string impl() const { return std::string(gclist::implId(set_->kind())); }

 private:
  std::unique_ptr<gclist::ConcurrentSet> set_;
};

py::dict reportToDict(const gclist::bench::RunReport& report) {
  py::dict out;
  out["impl"] = std::string(gclist::implId(report.impl));
  out["threads"] = report.threads;
  out["elapsed_seconds"] = report.elapsedSeconds;
  out["total_ops"] = report.totalOps;
  out["ops_per_sec"] = report.opsPerSec;
  out["alloc_net"] = report.allocNet;
  out["max_stall_ms"] = report.maxStallMs;
  py::dict tally;
  tally["contains"] = report.tally.containsOps;
  tally["add"] = report.tally.addOps;
  tally["remove"] = report.tally.removeOps;
  tally["contains_hits"] = report.tally.containsHits;
  tally["add_hits"] = report.tally.addHits;
  tally["remove_hits"] = report.tally.removeHits;
  out["tally"] = tally;
  return out;
}

}  // namespace

PYBIND11_MODULE(_gclist, m) {
  m.doc() = "Concurrent ordered sets with built-in node recycling";

  py::class_<PySet>(m, "Set")
      .def(py::init<const std::string&>(), py::arg("impl") = "gclf-lf")
      .def("add", &PySet::add, py::arg("key"),
           py::call_guard<py::gil_scoped_release>())
      .def("remove", &PySet::remove, py::arg("key"),
           py::call_guard<py::gil_scoped_release>())
      .def("contains", &PySet::contains, py::arg("key"),
           py::call_guard<py::gil_scoped_release>())
      .def("__contains__",
           [](PySet& s, std::int64_t key) {
             py::gil_scoped_release release;
             return s.contains(key);
           })
      .def("keys", &PySet::keys)
      .def_property_readonly("impl", &PySet::impl)
      .def("__repr__", [](const PySet& s) {
        return "Set(impl='" + s.impl() + "')";
      });

  m.def("implementations", [] {
    std::vector<std::string> ids;
    for (gclist::ImplKind kind : gclist::kAllImpls) {
      ids.emplace_back(gclist::implId(kind));
    }
    return ids;
  });

  m.def(
      "run_benchmark",
      [](const std::string& impl, int threads, double seconds, std::uint64_t ops,
         const std::tuple<int, int, int>& mix, std::int64_t key_range,
         std::uint64_t seed, std::uint64_t prefill) {
        gclist::bench::RunConfig config;
        config.impl = implFromString(impl);
        config.threads = threads;
        config.seconds = seconds;
        config.totalOps = ops;
        config.keyRange = key_range;
        config.seed = seed;
        config.prefill = prefill;
        config.mix = mixFromTuple(mix);
        gclist::bench::RunReport report;
        {
          py::gil_scoped_release release;
          report = gclist::bench::runBenchmark(config);
        }
        return reportToDict(report);
      },
      py::arg("impl"), py::arg("threads") = 1, py::arg("seconds") = 0.0,
      py::arg("ops") = 0, py::arg("mix") = std::make_tuple(90, 9, 1),
      py::arg("key_range") = 1024, py::arg("seed") = 1, py::arg("prefill") = 0);

  m.def(
      "compare_memory",
      [](const std::string& impl, const std::string& baseline, int threads,
         double seconds, std::uint64_t ops, const std::tuple<int, int, int>& mix,
         std::int64_t key_range, std::uint64_t seed, std::uint64_t prefill) {
        gclist::bench::RunConfig config;
        config.impl = implFromString(impl);
        config.threads = threads;
        config.seconds = seconds;
        config.totalOps = ops;
        config.keyRange = key_range;
        config.seed = seed;
        config.prefill = prefill;
        config.mix = mixFromTuple(mix);
        gclist::bench::RunConfig base = config;
        base.impl = implFromString(baseline);
        py::gil_scoped_release release;
        return gclist::bench::compareMemory(config, base);
      },
      py::arg("impl"), py::arg("baseline") = "hoh", py::arg("threads") = 1,
      py::arg("seconds") = 0.0, py::arg("ops") = 0,
      py::arg("mix") = std::make_tuple(90, 9, 1), py::arg("key_range") = 1024,
      py::arg("seed") = 1, py::arg("prefill") = 0);

  m.def(
      "record_history",
      [](const std::string& impl, int threads, int ops_per_thread,
         std::int64_t key_range, std::uint64_t seed,
         const std::tuple<int, int, int>& mix) {
        gclist::lincheck::RecordConfig config;
        config.impl = implFromString(impl);
        config.threads = threads;
        config.opsPerThread = ops_per_thread;
        config.keyRange = key_range;
        config.seed = seed;
        config.mix = mixFromTuple(mix);
        gclist::lincheck::History history;
        {
          py::gil_scoped_release release;
          history = gclist::lincheck::record(config);
        }
        std::ostringstream out;
        gclist::lincheck::writeHistory(out, history);
        return out.str();
      },
      py::arg("impl"), py::arg("threads") = 2, py::arg("ops_per_thread") = 10,
      py::arg("key_range") = 8, py::arg("seed") = 1,
      py::arg("mix") = std::make_tuple(34, 33, 33));

  m.def(
      "check_history",
      [](const std::string& dump) {
        std::istringstream in(dump);
        const auto history = gclist::lincheck::readHistory(in);
        gclist::lincheck::Verdict verdict;
        {
          py::gil_scoped_release release;
          verdict = gclist::lincheck::isLinearizable(history);
        }
        py::dict out;
        switch (verdict.outcome) {
          case gclist::lincheck::Verdict::Outcome::Linearizable:
            out["verdict"] = "linearizable";
            break;
          case gclist::lincheck::Verdict::Outcome::NotLinearizable:
            out["verdict"] = "not-linearizable";
            break;
          case gclist::lincheck::Verdict::Outcome::Inconclusive:
            out["verdict"] = "inconclusive";
            break;
        }
        py::list witness;
        for (const auto& step : verdict.witness) {
          witness.append(py::make_tuple(step.threadId,
                                        std::string(gclist::opName(step.op)),
                                        step.key, step.result));
        }
        out["witness"] = witness;
        if (!verdict.failingPrefix.empty()) {
          std::ostringstream prefix;
          gclist::lincheck::writeHistory(prefix, verdict.failingPrefix);
          out["failing_prefix"] = prefix.str();
        }
        out["states_explored"] = verdict.statesExplored;
        return out;
      },
      py::arg("dump"));
}
