#include "treecast/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treecast {

std::vector<ReceiverCompletion> ReceiverCompletions(const EventLog& log) {
  std::vector<ReceiverCompletion> out;
  for (const RequestRecord& rec : log.requests) {
    if (rec.arrival < log.config.warmup) continue;
    std::vector<std::pair<NodeId, int64_t>> per_receiver;
    for (const PartitionRecord& pr : rec.partitions) {
      if (pr.completion_slot < 0) {
        throw std::logic_error("request " + std::to_string(rec.id) +
                               " has not completed");
      }
      for (NodeId r : pr.receivers) {
        per_receiver.emplace_back(r, pr.completion_slot - rec.arrival);
      }
    }
    std::sort(per_receiver.begin(), per_receiver.end());
    for (const auto& [r, ct] : per_receiver) out.push_back({rec.id, r, ct});
  }
  return out;
}

std::vector<int64_t> ReceiverCompletionTimes(const EventLog& log) {
  std::vector<int64_t> out;
  for (const ReceiverCompletion& c : ReceiverCompletions(log)) {
    out.push_back(c.time);
  }
  return out;
}

CompletionStats ComputeCompletionStats(const std::vector<int64_t>& times) {
  CompletionStats s;
  s.count = times.size();
  if (times.empty()) return s;
  std::vector<int64_t> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (int64_t x : sorted) sum += static_cast<double>(x);
  s.mean = sum / static_cast<double>(sorted.size());
  const size_t rank = static_cast<size_t>(
      std::ceil(0.99 * static_cast<double>(sorted.size())));
  s.p99 = static_cast<double>(sorted[std::max<size_t>(rank, 1) - 1]);
  s.max = static_cast<double>(sorted.back());
  return s;
}

CompletionStats ComputeCompletionStats(const EventLog& log) {
  return ComputeCompletionStats(ReceiverCompletionTimes(log));
}

double BandwidthUsage(const EventLog& log) {
  double total = 0.0;
  for (const RequestRecord& rec : log.requests) {
    size_t edges = 0;
    for (const PartitionRecord& pr : rec.partitions) edges += pr.tree_edges.size();
    total += rec.volume * static_cast<double>(edges);
  }
  return total;
}

double DeliveredVolume(const EventLog& log) {
  double total = 0.0;
  for (double v : log.edge_volume) total += v;
  return total;
}

double SingleTreeBandwidth(const EventLog& log) {
  double total = 0.0;
  for (const RequestRecord& rec : log.requests) {
    total += rec.volume * rec.single_tree_edges;
  }
  return total;
}

GroupTableUsage ComputeGroupTableUsage(const EventLog& log) {
  const int n = log.network.num_nodes();
  const int64_t horizon = log.end_slot + 1;
  GroupTableUsage usage;
  usage.per_node_max.assign(n, 0);
  usage.max_out_degree.assign(n, 0);
  // diff[v][t]: change in the number of replicating trees at v in slot t.
  std::vector<std::vector<int>> diff(n);
  std::vector<int> outdeg(n, 0);
  for (const RequestRecord& rec : log.requests) {
    for (const PartitionRecord& pr : rec.partitions) {
      for (EdgeId e : pr.tree_edges) ++outdeg[log.network.edge(e).tail];
      const int64_t begin = rec.arrival + 1;
      const int64_t end = pr.completion_slot >= 0 ? pr.completion_slot + 1
                                                  : horizon;
      for (EdgeId e : pr.tree_edges) {
        NodeId v = log.network.edge(e).tail;
        if (outdeg[v] == 0) continue;
        usage.max_out_degree[v] = std::max(usage.max_out_degree[v], outdeg[v]);
        if (outdeg[v] >= 2) {
          if (diff[v].empty()) diff[v].assign(horizon + 1, 0);
          ++diff[v][begin];
          --diff[v][end];
        }
        outdeg[v] = 0;  // count each node once per tree
      }
    }
  }
  long total = 0;
  for (NodeId v = 0; v < n; ++v) {
    int running = 0;
    for (int d : diff[v]) {
      running += d;
      usage.per_node_max[v] = std::max(usage.per_node_max[v], running);
    }
    usage.network_max = std::max(usage.network_max, usage.per_node_max[v]);
    total += usage.per_node_max[v];
  }
  usage.mean_node_max = n > 0 ? static_cast<double>(total) / n : 0.0;
  return usage;
}

double MeanEdgeUtilization(const EventLog& log) {
  const int m = log.network.num_edges();
  if (m == 0 || log.end_slot == 0) return 0.0;
  double sum = 0.0;
  for (EdgeId e = 0; e < m; ++e) {
    sum += log.edge_volume[e] / (log.network.edge(e).capacity *
                                 log.config.slot *
                                 static_cast<double>(log.end_slot));
  }
  return sum / m;
}

MetricsReport Summarize(const EventLog& log) {
  MetricsReport r;
  r.completion = ComputeCompletionStats(log);
  r.total_bytes = BandwidthUsage(log);
  r.delivered_bytes = DeliveredVolume(log);
  r.single_tree_bytes = SingleTreeBandwidth(log);
  r.bw_overhead_vs_single_tree =
      r.single_tree_bytes > 0.0 ? r.total_bytes / r.single_tree_bytes : 1.0;
  r.group_table = ComputeGroupTableUsage(log);
  r.mean_edge_utilization = MeanEdgeUtilization(log);
  r.requests = log.requests.size();
  r.end_slot = log.end_slot;
  return r;
}

}  // namespace treecast
