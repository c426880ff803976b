// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mmf_oracle.h"
#include "test_util.h"
#include "treecast/engine.h"
#include "treecast/experiment.h"
#include "treecast/metrics.h"
#include "treecast/steiner.h"

namespace {

using namespace treecast;
using Clock = std::chrono::steady_clock;

int failures = 0;
int sim_runs = 0;

void Report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* fmt, double a = 0, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::vector<uint64_t> Seeds(int n) {
  std::vector<uint64_t> s;
  for (int i = 1; i <= n; ++i) s.push_back(static_cast<uint64_t>(i));
  return s;
}

int Workers() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ExperimentPreset Filter(ExperimentPreset p, const std::function<bool(const ConfigPoint&)>& keep) {
  std::vector<ConfigPoint> kept;
  for (ConfigPoint& pt : p.points) {
    if (keep(pt)) kept.push_back(std::move(pt));
  }
  p.points = std::move(kept);
  return p;
}

SweepResult Sweep(const ExperimentPreset& preset, int seeds) {
  SweepOptions opts;
  opts.seeds = Seeds(seeds);
  opts.workers = Workers();
  opts.overrides = {"record_edge_history=false", "check_invariants=true"};
  SweepResult r = RunSweep(preset, opts);
  sim_runs += static_cast<int>(r.runs.size());
  return r;
}

// Mean row of the point with this label and receiver count.
const ResultRow& MeanRow(const SweepResult& r, const std::string& label,
                         int receivers, double lambda = -1) {
  for (const ResultRow& row : r.rows) {
    if (row.seed == "mean" && row.scheme == label && row.receivers == receivers &&
        (lambda < 0 || row.lambda == lambda)) {
      return row;
    }
  }
  throw std::runtime_error("missing row " + label);
}

void TwoSenderExample() {
  auto start = Clock::now();
  SweepOptions opts;
  opts.seeds = {1};
  SweepResult r = RunSweep(FindPreset("fig1"), opts);
  sim_runs += static_cast<int>(r.runs.size());
  const double secs = Seconds(start);
  const int64_t v = static_cast<int64_t>(r.runs[0].point.config.size_mean);
  bool ok = secs < 1.0;
  std::string detail;
  for (const RunResult& run : r.runs) {
    for (const ReceiverCompletion& c : run.completions) {
      if (c.request != 1) continue;
      if (run.point.label == "dccast") {
        ok = ok && c.time == 2 * v;
        if (c.receiver == 6) detail += "dccast green " + std::to_string(c.time);
      }
      if (run.point.label == "quickcast_two" && (c.receiver == 6 || c.receiver == 7)) {
        ok = ok && c.time == v;
        if (c.receiver == 6) detail += ", quickcast_two right " + std::to_string(c.time);
      }
    }
  }
  detail += ", V=" + std::to_string(v) + Fmt(", %.3f s", secs);
  Report(1, ok, "two-sender example completes in 2V then V", detail);
}

void ClusteringGain() {
  auto start = Clock::now();
  SweepResult r = Sweep(FindPreset("fig2"), 10);
  const double secs = Seconds(start);
  bool ok = secs <= 600.0;
  std::string detail;
  for (int n : {10, 20}) {
    const ResultRow& single = MeanRow(r, "dccast", n);
    const ResultRow& split = MeanRow(r, "dccast+2cl", n);
    const double reduction = 1.0 - split.mean_ct / single.mean_ct;
    const double bw = split.total_bytes / single.total_bytes;
    ok = ok && reduction >= 0.25 && bw <= 1.10;
    detail += Fmt("N=%g: reduction %.1f%%, bandwidth x%.3f; ", n, 100 * reduction, bw);
  }
  detail += Fmt("10 seeds x 5000 slots in %.0f s", secs);
  Report(2, ok, "two-partition clustering cuts mean completion time", detail);
}

void Policies() {
  ExperimentPreset p = Filter(FindPreset("policies"),
                              [](const ConfigPoint& pt) { return pt.config.receivers == 20; });
  SweepResult r = Sweep(p, 10);
  auto row = [&](const char* policy) -> const ResultRow& {
    for (const ResultRow& x : r.rows) {
      if (x.seed == "mean" && x.policy == policy) return x;
    }
    throw std::runtime_error("missing policy row");
  };
  const ResultRow& mmf = row("mmf");
  const ResultRow& srpt = row("srpt");
  const ResultRow& fcfs = row("fcfs");
  double srpt_max = 0, mmf_max = 0;
  for (const RunResult& run : r.runs) {
    const std::string_view name = PolicyName(run.point.config.effective_policy());
    if (name == "srpt") srpt_max = std::max(srpt_max, run.metrics.completion.max);
    if (name == "mmf") mmf_max = std::max(mmf_max, run.metrics.completion.max);
  }
  const bool ok = mmf.mean_ct <= srpt.mean_ct && mmf.mean_ct <= fcfs.mean_ct &&
                  srpt_max >= mmf_max;
  Report(3, ok, "MMF mean <= SRPT, FCFS means; SRPT max >= MMF max",
         Fmt("mean mmf %.1f srpt %.1f fcfs %.1f", mmf.mean_ct, srpt.mean_ct,
             fcfs.mean_ct) +
             Fmt("; max srpt %.0f mmf %.0f", srpt_max, mmf_max));
}

void QuickCastVsDcCast() {
  auto run = [](double lambda) {
    return Sweep(Filter(FindPreset("qc-vs-dccast"),
                        [&](const ConfigPoint& pt) { return pt.config.arrival_rate == lambda; }),
                 10);
  };
  SweepResult heavy = run(1.0);
  const ResultRow& qc = MeanRow(heavy, "quickcast", 10);
  const ResultRow& dc = MeanRow(heavy, "dccast", 10);
  const double factor = dc.mean_ct / qc.mean_ct;
  const double bw = qc.total_bytes / dc.total_bytes;
  Report(4, factor >= 2.0 && bw <= 1.06, "heavy load mean improvement >= 2x, bandwidth <= +6%",
         Fmt("mean quickcast %.1f dccast %.1f, factor %.2f, bandwidth x%.3f", qc.mean_ct,
             dc.mean_ct, factor, bw) +
             Fmt("; quickcast max group entries %.0f", qc.max_group_entries));

  SweepResult light = run(0.01);
  const ResultRow& lq = MeanRow(light, "quickcast", 10);
  const ResultRow& ld = MeanRow(light, "dccast", 10);
  double qmax = 0, dmax = 0;
  for (const RunResult& x : light.runs) {
    double& m = x.point.label == "quickcast" ? qmax : dmax;
    m = std::max(m, x.metrics.completion.max);
  }
  Report(5, lq.mean_ct <= ld.mean_ct && dmax <= 1.5 * qmax,
         "light load: quickcast mean <= dccast mean, dccast max <= 1.5 x quickcast max",
         Fmt("mean quickcast %.2f dccast %.2f; max quickcast %.0f dccast %.0f", lq.mean_ct,
             ld.mean_ct, qmax, dmax));
}

void MaxMinOracle() {
  std::mt19937_64 rng(606);
  int checked = 0, bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const bool paths = i % 2 == 0;
    testing::Instance inst = testing::RandomInstance(rng, paths);
    RateVector got = DispatchMaxMinFair(inst.jobs, inst.net, 1.0);
    if (!testing::MaxMinViolation(inst.jobs, inst.net, 1.0, got).empty()) ++bad;
    if (paths) {
      RateVector want = testing::WaterFill(inst.jobs, inst.net, 1.0);
      for (size_t j = 0; j < got.size(); ++j) worst = std::max(worst, std::abs(got[j] - want[j]));
    }
    ++checked;
  }
  Report(6, bad == 0 && worst <= 1e-9, "max-min property and water-filling agreement",
         std::to_string(checked) + " instances, " + std::to_string(bad) +
             " violations" + Fmt(", max path deviation %.2e", worst));
}

void SteinerOracle() {
  std::mt19937_64 rng(707);
  double lo = 1e9, hi = 0;
  int invalid = 0;
  const int instances = 500;
  for (int i = 0; i < instances; ++i) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int max_links = n * (n - 1) / 2;
    const int links = n + static_cast<int>(rng() % (max_links - n + 1));
    Network net = GenerateRandomTopology(n, links, rng());
    WeightMap w = testing::RandomWeights(net, rng, true);
    NodeId root = static_cast<NodeId>(rng() % n);
    auto terms = testing::SampleNodes(n, 1 + static_cast<int>(rng() % (n - 1)), root, rng);
    ForwardingTree heur = MinWeightSteinerTree(net, w, root, terms);
    ForwardingTree exact = ExactSteinerTree(net, w, root, terms);
    if (!ValidateTree(net, heur).empty() || !ValidateTree(net, exact).empty()) ++invalid;
    const double ratio = TreeWeight(heur, w) / TreeWeight(exact, w);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  Report(7, invalid == 0 && lo >= 1.0 - 1e-9 && hi <= 2.0 + 1e-9,
         "heuristic within [1, 2] x exact Steiner weight, all trees valid",
         std::to_string(instances) + " instances, 3-10 nodes, symmetric weights" +
             Fmt(", ratio range [%.4f, %.4f]", lo, hi) + ", " + std::to_string(invalid) +
             " invalid");
}

// Every sweep above ran with per-slot checks enabled, which throw on any
// capacity, bookkeeping or conservation breach. This re-checks the logs of a
// scheme x policy grid directly.
void Conservation() {
  double load_err = 0, cap_excess = 0, vol_err = 0;
  std::string problem;
  int runs = 0;
  for (Scheme scheme : {Scheme::kDcCast, Scheme::kQuickCastNp, Scheme::kQuickCastTwo,
                        Scheme::kQuickCast}) {
    for (Policy policy : {Policy::kMaxMinFair, Policy::kFcfs, Policy::kSrpt}) {
      for (uint64_t seed : {1, 2}) {
        SimConfig cfg;
        cfg.scheme = scheme;
        cfg.policy = policy;
        cfg.slots = 400;
        cfg.seed = seed;
        cfg.record_edge_history = true;
        EventLog log = Run(cfg);
        ++runs;
        load_err = std::max(load_err, log.max_load_error);
        cap_excess = std::max(cap_excess, log.max_capacity_excess);
        for (const RequestRecord& req : log.requests) {
          for (const PartitionRecord& p : req.partitions) {
            vol_err = std::max(vol_err, std::abs(p.delivered - req.volume));
          }
        }
        for (const auto& slot : log.edge_rate) {
          for (EdgeId e = 0; e < log.network.num_edges(); ++e) {
            cap_excess = std::max(cap_excess, slot[e] - log.network.edge(e).capacity);
          }
        }
        if (std::string p = CheckLog(log); !p.empty() && problem.empty()) problem = p;
      }
    }
  }
  sim_runs += runs;
  const bool ok = problem.empty() && load_err <= 1e-6 && cap_excess <= 1e-9 && vol_err <= 1e-6;
  Report(8, ok, "capacity, volume conservation and load bookkeeping hold",
         std::to_string(sim_runs) + " checked runs" +
             Fmt("; grid max load error %.1e, capacity excess %.1e, volume error %.1e",
                 load_err, cap_excess, vol_err) +
             (problem.empty() ? "" : "; " + problem));
}

void Determinism() {
  bool ok = true;
  int compared = 0;
  for (const char* name : {"fig1", "policies", "partitioning", "qc-vs-dccast"}) {
    SweepOptions opts;
    opts.seeds = {1, 2, 3};
    opts.overrides = {"slots=300"};
    if (std::string(name) == "fig1") opts.overrides.clear();
    ExperimentPreset p = FindPreset(name);
    const std::string first = ToCsv(RunSweep(p, opts).rows);
    const std::string again = ToCsv(RunSweep(p, opts).rows);
    opts.workers = 2;
    const std::string two = ToCsv(RunSweep(p, opts).rows);
    opts.workers = 4;
    const std::string four = ToCsv(RunSweep(p, opts).rows);
    ok = ok && first == again && first == two && first == four;
    compared += 3;
  }
  Report(9, ok, "byte-identical CSV across repeats and worker counts",
         std::to_string(compared) + " comparisons over 4 presets, workers 1/2/4");
}

}  // namespace

int main() {
  auto start = Clock::now();
  auto guard = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      Report(id, false, "aborted", e.what());
    }
  };
  guard(1, TwoSenderExample);
  guard(2, ClusteringGain);
  guard(3, Policies);
  guard(4, QuickCastVsDcCast);
  guard(6, MaxMinOracle);
  guard(7, SteinerOracle);
  guard(8, Conservation);
  guard(9, Determinism);
  std::printf("%d criteria failed, %.0f s total\n", failures, Seconds(start));
  return failures;
}
