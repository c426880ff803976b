#include "treecast/engine.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "treecast/rates.h"

namespace treecast {

namespace {

constexpr double kTolerance = 1e-9;

TransferRequest MakeRequest(RequestId id, int64_t arrival, NodeId source,
                            std::vector<NodeId> receivers, double volume) {
  std::sort(receivers.begin(), receivers.end());
  return {id, arrival, source, std::move(receivers), volume};
}

std::vector<TransferRequest> Fig1Workload(const SimConfig& cfg) {
  // Blue (id 0) is ordered ahead of green (id 1) within slot 0.
  return {MakeRequest(0, 0, 0, {4, 5}, cfg.size_mean),
          MakeRequest(1, 0, 1, {4, 5, 6, 7}, cfg.size_mean)};
}

std::vector<TransferRequest> Fig4Workload() {
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {0, 3},
                                       {1, 2}, {1, 3}, {2, 3}};
  std::vector<TransferRequest> out;
  for (int s = 0; s < 4; ++s) {
    std::vector<NodeId> leaves;
    for (int p = 0; p < 6; ++p) {
      if (pairs[p].first == s || pairs[p].second == s) leaves.push_back(5 + 2 * p);
    }
    out.push_back(MakeRequest(s, 0, s, leaves, 10.0 + s));
  }
  return out;
}

double DrawSize(const SimConfig& cfg, std::mt19937_64& rng) {
  double x = 0.0;
  switch (cfg.size_dist) {
    case SizeDistribution::kExponential:
      x = std::exponential_distribution<double>(1.0 / cfg.size_mean)(rng);
      break;
    case SizeDistribution::kPareto: {
      // Shape chosen so the untruncated mean equals size_mean.
      const double shape = cfg.size_mean / (cfg.size_mean - cfg.size_min);
      double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      u = std::max(u, 1e-300);
      x = cfg.size_min / std::pow(u, 1.0 / shape);
      break;
    }
    case SizeDistribution::kLogNormal: {
      const double sigma = cfg.lognormal_sigma;
      const double mu = std::log(cfg.size_mean) - sigma * sigma / 2.0;
      x = std::lognormal_distribution<double>(mu, sigma)(rng);
      break;
    }
  }
  x = std::clamp(x, cfg.size_min, cfg.size_max);
  // A zero minimum still has to yield a positive volume.
  return std::max(x, 1e-9);
}

}  // namespace

Network MakeNetwork(const SimConfig& cfg) {
  if (cfg.topology == "random") {
    return GenerateRandomTopology(cfg.random_nodes, cfg.random_links,
                                  cfg.effective_topology_seed());
  }
  for (const std::string& name : BuiltinTopologyNames()) {
    if (cfg.topology == name) return BuiltinTopology(name);
  }
  return LoadTopologyFile(cfg.topology);
}

std::vector<TransferRequest> ParseTrace(std::string_view text) {
  std::vector<TransferRequest> out;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    int64_t arrival = 0;
    NodeId source = 0;
    double volume = 0.0;
    if (!(fields >> arrival)) continue;
    if (!(fields >> source >> volume)) {
      throw ConfigError("trace line " + std::to_string(line_no) +
                        ": expected '<arrival> <source> <volume> <receivers...>'");
    }
    std::vector<NodeId> receivers;
    for (NodeId r; fields >> r;) receivers.push_back(r);
    if (!fields.eof() || receivers.empty() || arrival < 0) {
      throw ConfigError("trace line " + std::to_string(line_no) +
                        ": bad receiver list");
    }
    out.push_back(MakeRequest(static_cast<RequestId>(out.size()), arrival,
                              source, std::move(receivers), volume));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.arrival < b.arrival; });
  return out;
}

std::vector<TransferRequest> GenerateWorkload(const SimConfig& cfg,
                                              const Network& net) {
  ValidateConfig(cfg);
  switch (cfg.workload) {
    case WorkloadKind::kFig1:
      return Fig1Workload(cfg);
    case WorkloadKind::kFig4:
      return Fig4Workload();
    case WorkloadKind::kTrace: {
      std::ifstream in(cfg.trace_path);
      if (!in) throw ConfigError("cannot open trace '" + cfg.trace_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      return ParseTrace(buf.str());
    }
    case WorkloadKind::kPoisson:
      break;
  }
  const int n = net.num_nodes();
  if (cfg.receivers >= n) {
    throw ConfigError("receivers (" + std::to_string(cfg.receivers) +
                      ") must be below the node count (" + std::to_string(n) +
                      ")");
  }
  std::mt19937_64 rng(cfg.seed);
  std::poisson_distribution<int> arrivals(cfg.arrival_rate);
  std::uniform_int_distribution<NodeId> pick_source(0, n - 1);
  std::vector<NodeId> pool(n - 1);
  std::vector<TransferRequest> out;
  for (int64_t t = 0; t < cfg.slots; ++t) {
    const int count = arrivals(rng);
    for (int i = 0; i < count; ++i) {
      const NodeId source = pick_source(rng);
      for (NodeId v = 0, k = 0; v < n; ++v) {
        if (v != source) pool[k++] = v;
      }
      // Partial Fisher-Yates: the first `receivers` slots are the sample.
      for (int k = 0; k < cfg.receivers; ++k) {
        std::uniform_int_distribution<int> pick(k, n - 2);
        std::swap(pool[k], pool[pick(rng)]);
      }
      std::vector<NodeId> receivers(pool.begin(), pool.begin() + cfg.receivers);
      const double volume = DrawSize(cfg, rng);
      out.push_back(MakeRequest(static_cast<RequestId>(out.size()), t, source,
                                std::move(receivers), volume));
    }
  }
  return out;
}

EventLog Run(const SimConfig& cfg) {
  ValidateConfig(cfg);
  Network net = MakeNetwork(cfg);
  std::vector<TransferRequest> requests = GenerateWorkload(cfg, net);
  return Run(cfg, net, std::move(requests));
}

EventLog Run(const SimConfig& cfg, const Network& net,
             std::vector<TransferRequest> requests) {
  ValidateConfig(cfg);
  std::stable_sort(requests.begin(), requests.end(),
                   [](const auto& a, const auto& b) { return a.arrival < b.arrival; });
  for (const TransferRequest& req : requests) ValidateRequest(net, req);

  const DistanceMatrix dist = HopDistances(net);
  const SubmitOptions opts = cfg.submit_options();
  const Policy policy = cfg.effective_policy();
  const int num_edges = net.num_edges();

  EventLog log;
  log.config = cfg;
  log.network = net;
  log.edge_volume.assign(num_edges, 0.0);
  log.requests.reserve(requests.size());

  LoadMap loads(net);
  std::vector<PartitionJob> jobs;
  struct Ref {
    size_t request;
    size_t partition;
  };
  std::vector<Ref> refs;
  std::vector<double> edge_sum(num_edges);
  std::vector<double> expected_load(num_edges);

  auto fail = [](const std::string& what, int64_t t) {
    throw InvariantViolation("slot " + std::to_string(t) + ": " + what);
  };

  size_t next = 0;
  int64_t t = 0;
  while (next < requests.size() || !jobs.empty()) {
    if (jobs.empty() && requests[next].arrival > t) {
      // Idle gap: nothing to schedule until the next arrival.
      if (cfg.record_edge_history) {
        log.edge_rate.resize(requests[next].arrival,
                             std::vector<double>(num_edges, 0.0));
      }
      t = requests[next].arrival;
    }

    // Admission. Jobs appended here sit past `dispatchable` and first get a
    // rate in slot t + 1.
    const size_t dispatchable = jobs.size();
    for (; next < requests.size() && requests[next].arrival == t; ++next) {
      const TransferRequest& req = requests[next];
      SubmitResult sub = Submit(req, opts, net, loads, dist);
      RequestRecord rec;
      rec.id = req.id;
      rec.arrival = req.arrival;
      rec.source = req.source;
      rec.receivers = req.receivers;
      rec.volume = req.volume;
      rec.single_tree_edges = sub.single_tree_edges;
      for (PartitionJob& job : sub.jobs) {
        PartitionRecord pr;
        pr.index = job.index;
        pr.receivers = job.receivers;
        pr.tree_edges = job.tree.edges;
        refs.push_back({log.requests.size(), rec.partitions.size()});
        rec.partitions.push_back(std::move(pr));
        jobs.push_back(std::move(job));
      }
      log.requests.push_back(std::move(rec));
    }

    // Dispatch and delivery.
    std::fill(edge_sum.begin(), edge_sum.end(), 0.0);
    if (dispatchable > 0) {
      std::span<const PartitionJob> active(jobs.data(), dispatchable);
      RateVector rates =
          Dispatch(policy, active, net, cfg.slot, cfg.srpt_ranking);
      for (size_t i = 0; i < dispatchable; ++i) {
        PartitionJob& job = jobs[i];
        const double rate = rates[i];
        if (rate <= 0.0) continue;
        double moved = std::min(rate * cfg.slot, job.residual);
        if (job.residual - moved <= kTolerance) moved = job.residual;
        PartitionRecord& pr =
            log.requests[refs[i].request].partitions[refs[i].partition];
        if (cfg.check_invariants && job.arrival >= t) {
          fail("job received a rate before its admission slot ended", t);
        }
        if (pr.first_active_slot < 0) pr.first_active_slot = t;
        for (EdgeId e : job.tree.edges) {
          edge_sum[e] += rate;
          log.edge_volume[e] += moved;
        }
        ReleaseLoad(job, moved, loads);
        pr.delivered += moved;
        if (job.residual <= 0.0) pr.completion_slot = t;
      }
    }
    if (cfg.check_invariants) {
      for (EdgeId e = 0; e < num_edges; ++e) {
        const double excess = edge_sum[e] - net.edge(e).capacity;
        log.max_capacity_excess = std::max(log.max_capacity_excess, excess);
        if (excess > kTolerance) {
          std::ostringstream msg;
          msg << "edge " << e << " carries " << edge_sum[e] << " > capacity "
              << net.edge(e).capacity;
          fail(msg.str(), t);
        }
      }
    }
    if (cfg.record_edge_history) log.edge_rate.push_back(edge_sum);

    // Drop finished jobs, keeping order.
    size_t keep = 0;
    for (size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].residual > 0.0) {
        if (keep != i) {
          jobs[keep] = std::move(jobs[i]);
          refs[keep] = refs[i];
        }
        ++keep;
      }
    }
    jobs.resize(keep);
    refs.resize(keep);

    if (cfg.check_invariants) {
      std::fill(expected_load.begin(), expected_load.end(), 0.0);
      for (const PartitionJob& job : jobs) {
        for (EdgeId e : job.tree.edges) expected_load[e] += job.residual;
      }
      for (EdgeId e = 0; e < num_edges; ++e) {
        const double err = std::abs(expected_load[e] - loads[e]);
        log.max_load_error = std::max(log.max_load_error, err);
        if (loads[e] < 0.0 ||
            err > 1e-6 * std::max(1.0, expected_load[e])) {
          std::ostringstream msg;
          msg << "load on edge " << e << " is " << loads[e]
              << " but residuals sum to " << expected_load[e];
          fail(msg.str(), t);
        }
      }
    }
    ++t;
  }
  log.end_slot = t;

  if (cfg.check_invariants) {
    if (std::string problem = CheckLog(log); !problem.empty()) {
      throw InvariantViolation(problem);
    }
  }
  return log;
}

std::string CheckLog(const EventLog& log) {
  for (const RequestRecord& rec : log.requests) {
    std::vector<NodeId> covered;
    for (const PartitionRecord& pr : rec.partitions) {
      covered.insert(covered.end(), pr.receivers.begin(), pr.receivers.end());
    }
    std::sort(covered.begin(), covered.end());
    if (covered != rec.receivers) {
      return "request " + std::to_string(rec.id) +
             ": partitions do not cover the receiver set exactly once";
    }
    for (const PartitionRecord& pr : rec.partitions) {
      std::ostringstream where;
      where << "request " << rec.id << " partition " << pr.index << ": ";
      if (std::abs(pr.delivered - rec.volume) > 1e-6) {
        where << "delivered " << pr.delivered << " of " << rec.volume;
        return where.str();
      }
      if (pr.completion_slot < rec.arrival + 1) {
        where << "completed in slot " << pr.completion_slot
              << " before arrival slot " << rec.arrival << " ended";
        return where.str();
      }
      if (pr.first_active_slot < rec.arrival + 1) {
        where << "active in slot " << pr.first_active_slot;
        return where.str();
      }
    }
  }
  return {};
}

}  // namespace treecast
