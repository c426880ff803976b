#ifndef TREECAST_ENGINE_H
#define TREECAST_ENGINE_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "treecast/cohort.h"
#include "treecast/config.h"
#include "treecast/network.h"

namespace treecast {

// A runtime check on capacity, volume conservation, causality or load
// bookkeeping failed.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the topology named by cfg.topology.
Network MakeNetwork(const SimConfig& cfg);

// Requests sorted by (arrival, id), ids dense from 0. Throws ConfigError when
// cfg.receivers does not fit the network.
std::vector<TransferRequest> GenerateWorkload(const SimConfig& cfg,
                                              const Network& net);

// Trace format: "<arrival> <source> <volume> <receiver>..." per line, '#'
// comments. Ids follow line order.
std::vector<TransferRequest> ParseTrace(std::string_view text);

struct PartitionRecord {
  int index = 1;
  std::vector<NodeId> receivers;
  std::vector<EdgeId> tree_edges;
  double delivered = 0.0;
  int64_t first_active_slot = -1;  // first slot with a positive rate
  int64_t completion_slot = -1;    // slot in which the last volume moved
};

struct RequestRecord {
  RequestId id = 0;
  int64_t arrival = 0;
  NodeId source = 0;
  std::vector<NodeId> receivers;
  double volume = 0.0;
  int single_tree_edges = 0;  // tree size had the request not been split
  std::vector<PartitionRecord> partitions;
};

struct EventLog {
  SimConfig config;
  Network network;
  std::vector<RequestRecord> requests;
  int64_t end_slot = 0;  // slots [0, end_slot) were simulated
  // Total volume carried per edge; rate * slot summed over slots and jobs.
  std::vector<double> edge_volume;
  // edge_rate[t][e]: summed rate on edge e in slot t. Empty unless
  // config.record_edge_history.
  std::vector<std::vector<double>> edge_rate;
  // Largest observed |L_e - sum of residuals over trees crossing e|.
  double max_load_error = 0.0;
  // Largest observed (allocated - capacity) over all slots and edges.
  double max_capacity_excess = 0.0;
};

// Runs the slotted simulation until every request has drained. Each slot
// admits that slot's arrivals, then dispatches rates over jobs admitted in
// earlier slots and delivers rate * slot per job. With
// cfg.check_invariants, any bookkeeping or capacity breach throws
// InvariantViolation.
EventLog Run(const SimConfig& cfg);

// Same loop over an explicit network and request list.
EventLog Run(const SimConfig& cfg, const Network& net,
             std::vector<TransferRequest> requests);

// Re-checks volume conservation, causality and completion on a finished log.
// Returns an empty string if all hold.
std::string CheckLog(const EventLog& log);

}  // namespace treecast

#endif  // TREECAST_ENGINE_H
