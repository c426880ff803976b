#include "treecast/experiment.h"

#include <json.hpp>

#include "treecast/engine.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <thread>

namespace treecast {

namespace {

SimConfig RandomBase() {
  SimConfig c;
  c.topology = "random";
  c.random_nodes = 50;
  c.random_links = 150;
  c.arrival_rate = 1.0;
  c.size_dist = SizeDistribution::kExponential;
  c.size_mean = 20.0;
  c.size_min = 2.0;
  c.size_max = 2000.0;
  c.partition_factor = 1.1;
  c.slot = 1.0;
  return c;
}

SimConfig GScaleBase() {
  SimConfig c = RandomBase();
  c.topology = "gscale";
  // Stand-in for the unpublished Hadoop size distribution.
  c.size_dist = SizeDistribution::kLogNormal;
  c.lognormal_sigma = 2.0;
  c.receivers = 10;
  return c;
}

ConfigPoint Point(std::string label, SimConfig c) {
  return {std::move(label), std::move(c)};
}

std::string Label(const SimConfig& c) {
  std::string label(SchemeName(c.scheme));
  if (c.strategy != PartitionStrategy::kProximity) {
    label += "+";
    label += StrategyName(c.strategy);
  }
  return label;
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::vector<std::string> PresetNames() {
  return {"fig1",     "fig2",      "policies", "partitioning",
          "bw-partitioning", "qc-vs-dccast", "copies"};
}

ExperimentPreset FindPreset(std::string_view name) {
  ExperimentPreset p;
  p.name = std::string(name);
  if (name == "fig1") {
    p.description = "weakest-link demo: single tree vs two trees";
    SimConfig c;
    c.topology = "fig1";
    c.workload = WorkloadKind::kFig1;
    c.size_mean = 10.0;
    c.size_min = 0.0;
    c.slots = 1;
    for (Scheme s : {Scheme::kDcCast, Scheme::kQuickCastTwo, Scheme::kQuickCast}) {
      c.scheme = s;
      p.points.push_back(Point(Label(c), c));
    }
  } else if (name == "fig2") {
    p.description = "random 50-node topology, two-way clustering vs none (FCFS)";
    SimConfig c = RandomBase();
    c.slots = 5000;
    c.policy = Policy::kFcfs;
    for (int n : {10, 20}) {
      c.receivers = n;
      c.scheme = Scheme::kDcCast;
      p.points.push_back(Point("dccast", c));
      c.scheme = Scheme::kQuickCastTwo;
      p.points.push_back(Point("dccast+2cl", c));
    }
  } else if (name == "policies") {
    p.description = "FCFS vs SRPT vs max-min fair over single trees, heavy load";
    SimConfig c = RandomBase();
    c.size_dist = SizeDistribution::kPareto;
    c.slots = 1000;
    c.scheme = Scheme::kQuickCastNp;
    for (int n : {5, 10, 20}) {
      c.receivers = n;
      for (Policy pol : {Policy::kFcfs, Policy::kSrpt, Policy::kMaxMinFair}) {
        c.policy = pol;
        p.points.push_back(Point(Label(c), c));
      }
    }
  } else if (name == "partitioning") {
    p.description = "selective vs no vs always partitioning";
    SimConfig c = RandomBase();
    c.slots = 1000;
    for (int n : {5, 10}) {
      c.receivers = n;
      for (Scheme s :
           {Scheme::kQuickCast, Scheme::kQuickCastNp, Scheme::kQuickCastTwo}) {
        c.scheme = s;
        p.points.push_back(Point(Label(c), c));
      }
    }
  } else if (name == "bw-partitioning") {
    p.description = "bandwidth of two-way split strategies vs a single tree";
    SimConfig c = RandomBase();
    c.slots = 1000;
    for (int n : {5, 10}) {
      c.receivers = n;
      c.scheme = Scheme::kQuickCastTwo;
      for (PartitionStrategy s :
           {PartitionStrategy::kRandomSplit, PartitionStrategy::kProximity,
            PartitionStrategy::kSourceDistance}) {
        c.strategy = s;
        p.points.push_back(Point(
            "quickcast_two+" + std::string(StrategyName(s)), c));
      }
      c.strategy = PartitionStrategy::kProximity;
      c.scheme = Scheme::kQuickCastNp;
      p.points.push_back(Point("single_tree", c));
    }
  } else if (name == "qc-vs-dccast") {
    p.description = "QuickCast vs DCCast on GScale under light and heavy load";
    SimConfig c = GScaleBase();
    for (double lambda : {0.01, 1.0}) {
      c.arrival_rate = lambda;
      c.slots = lambda < 0.1 ? 10000 : 2000;
      for (Scheme s : {Scheme::kQuickCast, Scheme::kDcCast}) {
        c.scheme = s;
        p.points.push_back(Point(Label(c), c));
      }
    }
  } else if (name == "copies") {
    p.description = "effect of copies per object on GScale";
    SimConfig c = GScaleBase();
    c.slots = 5000;
    for (double lambda : {0.01, 0.1}) {
      c.arrival_rate = lambda;
      for (int n = 2; n <= 10; ++n) {
        c.receivers = n;
        for (Scheme s : {Scheme::kQuickCast, Scheme::kDcCast}) {
          c.scheme = s;
          p.points.push_back(Point(Label(c), c));
        }
      }
    }
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return p;
}

std::string CsvHeader() {
  return "preset,scheme,policy,lambda,receivers,pf,seed,mean_ct,p99_ct,max_ct,"
         "total_bytes,bw_overhead_vs_single_tree,max_group_entries,runtime_ms";
}

std::string CsvLine(const ResultRow& r) {
  std::string out;
  out += r.preset + "," + r.scheme + "," + r.policy + "," + Num(r.lambda) +
         "," + std::to_string(r.receivers) + "," + Num(r.pf) + "," + r.seed +
         "," + Num(r.mean_ct) + "," + Num(r.p99_ct) + "," + Num(r.max_ct) +
         "," + Num(r.total_bytes) + "," + Num(r.bw_overhead_vs_single_tree) +
         "," + std::to_string(r.max_group_entries) + "," + Num(r.runtime_ms);
  return out;
}

std::string ToCsv(const std::vector<ResultRow>& rows) {
  std::string out = CsvHeader() + "\n";
  for (const ResultRow& r : rows) out += CsvLine(r) + "\n";
  return out;
}

ResultRow MakeRow(const std::string& preset, const RunResult& run,
                  bool timing) {
  const SimConfig& c = run.point.config;
  ResultRow row;
  row.preset = preset;
  row.scheme = run.point.label;
  row.policy = std::string(PolicyName(c.effective_policy()));
  row.lambda = c.arrival_rate;
  row.receivers = c.receivers;
  row.pf = c.submit_options().partition_factor;
  row.seed = std::to_string(run.seed);
  row.mean_ct = run.metrics.completion.mean;
  row.p99_ct = run.metrics.completion.p99;
  row.max_ct = run.metrics.completion.max;
  row.total_bytes = run.metrics.total_bytes;
  row.bw_overhead_vs_single_tree = run.metrics.bw_overhead_vs_single_tree;
  row.max_group_entries = run.metrics.group_table.network_max;
  row.runtime_ms = timing ? run.runtime_ms : 0.0;
  return row;
}

SweepResult RunSweep(const ExperimentPreset& preset, const SweepOptions& opts) {
  if (opts.seeds.empty()) throw ConfigError("seed list is empty");
  const size_t per_point = opts.seeds.size();
  const size_t total = preset.points.size() * per_point;

  SweepResult result;
  result.runs.resize(total);
  for (size_t i = 0; i < total; ++i) {
    RunResult& r = result.runs[i];
    r.point = preset.points[i / per_point];
    r.seed = opts.seeds[i % per_point];
    r.point.config.seed = r.seed;
    ApplyOverrides(r.point.config, opts.overrides);
    ValidateConfig(r.point.config);
  }

  std::vector<std::exception_ptr> errors(total);
  auto work = [&](size_t i) {
    RunResult& r = result.runs[i];
    try {
      auto start = std::chrono::steady_clock::now();
      EventLog log = Run(r.point.config);
      r.metrics = Summarize(log);
      r.completions = ReceiverCompletions(log);
      r.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    for (size_t i = 0; i < total; ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i; (i = next.fetch_add(1)) < total;) work(i);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (size_t p = 0; p < preset.points.size(); ++p) {
    ResultRow mean;
    for (size_t s = 0; s < per_point; ++s) {
      const RunResult& run = result.runs[p * per_point + s];
      ResultRow row = MakeRow(preset.name, run, opts.timing);
      if (s == 0) {
        mean = row;
        mean.seed = "mean";
        mean.mean_ct = mean.p99_ct = mean.max_ct = 0.0;
        mean.total_bytes = mean.bw_overhead_vs_single_tree = 0.0;
        mean.runtime_ms = 0.0;
        mean.max_group_entries = 0;
      }
      mean.mean_ct += row.mean_ct / per_point;
      mean.p99_ct += row.p99_ct / per_point;
      mean.max_ct += row.max_ct / per_point;
      mean.total_bytes += row.total_bytes / per_point;
      mean.bw_overhead_vs_single_tree +=
          row.bw_overhead_vs_single_tree / per_point;
      mean.runtime_ms += row.runtime_ms / per_point;
      mean.max_group_entries =
          std::max(mean.max_group_entries, row.max_group_entries);
      result.rows.push_back(std::move(row));
    }
    result.rows.push_back(std::move(mean));
  }
  return result;
}

std::string SweepJson(const std::string& name, const SweepResult& result) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["name"] = name;
  doc["columns"] = CsvHeader();
  ordered_json runs = ordered_json::array();
  for (const RunResult& r : result.runs) {
    ordered_json run;
    run["label"] = r.point.label;
    run["seed"] = r.seed;
    ordered_json cfg;
    for (const auto& [k, v] : ConfigEntries(r.point.config)) cfg[k] = v;
    run["config"] = cfg;
    const MetricsReport& m = r.metrics;
    run["summary"] = {
        {"requests", m.requests},
        {"end_slot", m.end_slot},
        {"mean_ct", m.completion.mean},
        {"p99_ct", m.completion.p99},
        {"max_ct", m.completion.max},
        {"total_bytes", m.total_bytes},
        {"delivered_bytes", m.delivered_bytes},
        {"single_tree_bytes", m.single_tree_bytes},
        {"bw_overhead_vs_single_tree", m.bw_overhead_vs_single_tree},
        {"mean_edge_utilization", m.mean_edge_utilization},
        {"max_group_entries", m.group_table.network_max},
        {"mean_node_max_group_entries", m.group_table.mean_node_max},
    };
    std::vector<int64_t> times;
    for (const ReceiverCompletion& c : r.completions) times.push_back(c.time);
    run["completion_times"] = times;
    run["group_entries_per_node"] = m.group_table.per_node_max;
    run["max_out_degree_per_node"] = m.group_table.max_out_degree;
    runs.push_back(std::move(run));
  }
  doc["runs"] = std::move(runs);
  return doc.dump(2) + "\n";
}

std::vector<uint64_t> ParseSeedRange(std::string_view text) {
  auto parse = [&](std::string_view s) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("bad seed list '" + std::string(text) + "'");
    }
    return v;
  };
  if (text.empty()) throw ConfigError("seed list is empty");
  std::vector<uint64_t> seeds;
  if (size_t dots = text.find(".."); dots != std::string_view::npos) {
    uint64_t a = parse(text.substr(0, dots));
    uint64_t b = parse(text.substr(dots + 2));
    if (b < a) throw ConfigError("seed range '" + std::string(text) + "' is empty");
    for (uint64_t s = a; s <= b; ++s) seeds.push_back(s);
  } else {
    seeds.push_back(parse(text));
  }
  return seeds;
}

}  // namespace treecast
