#ifndef TREECAST_COHORT_H
#define TREECAST_COHORT_H

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "treecast/network.h"
#include "treecast/steiner.h"

namespace treecast {

using RequestId = int64_t;

// A P2MP transfer: one source, a fixed receiver set, one object volume.
struct TransferRequest {
  RequestId id = 0;
  int64_t arrival = 0;  // timeslot
  NodeId source = 0;
  std::vector<NodeId> receivers;  // sorted, distinct, excludes source
  double volume = 0.0;
};

// Throws std::invalid_argument if the request violates its invariants.
void ValidateRequest(const Network& net, const TransferRequest& req);

// One receiver subset of a request and the tree serving it. Every partition
// carries the whole object, so residual starts at the request volume.
struct PartitionJob {
  RequestId request = 0;
  int index = 1;  // 1-based within the request
  int64_t arrival = 0;
  std::vector<NodeId> receivers;  // sorted; equals tree.terminals
  ForwardingTree tree;
  double volume = 0.0;
  double residual = 0.0;
};

// Ordering key shared by the dispatchers: (arrival, request, partition).
inline bool JobKeyLess(const PartitionJob& a, const PartitionJob& b) {
  if (a.arrival != b.arrival) return a.arrival < b.arrival;
  if (a.request != b.request) return a.request < b.request;
  return a.index < b.index;
}

// Agglomerative hierarchy with average linkage. merges()[i] joins clusters
// left and right (ids: 0..m-1 are singletons in sorted receiver order,
// m+i is the cluster produced by merge i).
class ClusterHierarchy {
 public:
  struct Merge {
    int left = 0;
    int right = 0;
    double distance = 0.0;
  };

  ClusterHierarchy() = default;
  ClusterHierarchy(std::vector<NodeId> items, std::vector<Merge> merges)
      : items_(std::move(items)), merges_(std::move(merges)) {}

  const std::vector<NodeId>& items() const { return items_; }
  const std::vector<Merge>& merges() const { return merges_; }

  // Exactly k clusters for 1 <= k <= items().size(). Each cluster is
  // sorted; clusters are ordered by their smallest member.
  std::vector<std::vector<NodeId>> Cut(int k) const;

 private:
  std::vector<NodeId> items_;
  std::vector<Merge> merges_;
};

using PairDistance = std::function<double(NodeId, NodeId)>;

// Repeatedly merges the two clusters with the smallest mean pairwise
// distance. Ties go to the pair whose (smaller min-member, larger
// min-member) is lexicographically smallest.
ClusterHierarchy Agglomerate(const std::vector<NodeId>& receivers,
                             const PairDistance& distance);
ClusterHierarchy Agglomerate(const std::vector<NodeId>& receivers,
                             const DistanceMatrix& dist);

// How candidate partitions are formed before the weight test.
enum class PartitionStrategy {
  kProximity,       // average linkage on receiver-to-receiver hop distance
  kSourceDistance,  // average linkage on |hops(src,a) - hops(src,b)|
  kRandomSplit,     // each receiver joins one of two groups with p = 1/2
};

struct SubmitOptions {
  int max_partitions = 2;
  double partition_factor = 1.1;  // +inf forces the k = n split
  PartitionStrategy strategy = PartitionStrategy::kProximity;
  uint64_t seed = 0;  // kRandomSplit only, mixed with the request id
};

struct SubmitResult {
  std::vector<PartitionJob> jobs;
  double single_tree_weight = 0.0;
  int single_tree_edges = 0;
  // Sum of partition tree weights under the pre-assignment weights for the
  // accepted split; equals single_tree_weight when no split was accepted.
  double accepted_weight = 0.0;
};

// Partitions a newly arrived request and selects its forwarding trees.
// Adds the request volume to `loads` on every edge of every returned tree.
SubmitResult Submit(const TransferRequest& req, const SubmitOptions& opts,
                    const Network& net, LoadMap& loads,
                    const DistanceMatrix& dist);

// Records `delivered` volume on `job`: lowers its residual and releases the
// same amount of load on each of its tree edges. Throws
// std::invalid_argument when delivered is negative or exceeds the residual.
void ReleaseLoad(PartitionJob& job, double delivered, LoadMap& loads);

}  // namespace treecast

#endif  // TREECAST_COHORT_H
