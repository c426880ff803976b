#ifndef TREECAST_METRICS_H
#define TREECAST_METRICS_H

#include <cstdint>
#include <vector>

#include "treecast/engine.h"

namespace treecast {

struct CompletionStats {
  double mean = 0.0;
  double p99 = 0.0;  // nearest-rank
  double max = 0.0;
  size_t count = 0;
};

struct ReceiverCompletion {
  RequestId request = 0;
  NodeId receiver = 0;
  int64_t time = 0;
};

// Completion time of every receiver of every request that arrived at or
// after the warmup: completion slot of its partition minus arrival slot.
// Ordered by (request, receiver). Throws std::logic_error if any partition
// has not completed.
std::vector<ReceiverCompletion> ReceiverCompletions(const EventLog& log);
std::vector<int64_t> ReceiverCompletionTimes(const EventLog& log);

CompletionStats ComputeCompletionStats(const std::vector<int64_t>& times);
CompletionStats ComputeCompletionStats(const EventLog& log);

// Sum over requests of volume times the edge count of all partition trees.
double BandwidthUsage(const EventLog& log);
// The same quantity from the delivery side: volume carried, summed over
// edges. Agrees with BandwidthUsage once the log has drained.
double DeliveredVolume(const EventLog& log);
// Bandwidth had every request used its unsplit tree.
double SingleTreeBandwidth(const EventLog& log);

struct GroupTableUsage {
  // Largest number of simultaneously active trees in which the node
  // replicates (out-degree >= 2), per node.
  std::vector<int> per_node_max;
  int network_max = 0;
  double mean_node_max = 0.0;
  // Largest out-degree the node has in any tree (action buckets needed).
  std::vector<int> max_out_degree;
};

// A partition's tree counts as active from the slot after admission
// through its completion slot.
GroupTableUsage ComputeGroupTableUsage(const EventLog& log);

// Carried volume over (capacity * slot * simulated slots), averaged over
// edges.
double MeanEdgeUtilization(const EventLog& log);

struct MetricsReport {
  CompletionStats completion;
  double total_bytes = 0.0;
  double delivered_bytes = 0.0;
  double single_tree_bytes = 0.0;
  double bw_overhead_vs_single_tree = 1.0;
  GroupTableUsage group_table;
  double mean_edge_utilization = 0.0;
  size_t requests = 0;
  int64_t end_slot = 0;
};

MetricsReport Summarize(const EventLog& log);

}  // namespace treecast

#endif  // TREECAST_METRICS_H
