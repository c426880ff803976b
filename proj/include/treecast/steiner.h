#ifndef TREECAST_STEINER_H
#define TREECAST_STEINER_H

#include <stdexcept>
#include <string>
#include <vector>

#include "treecast/network.h"

namespace treecast {

// Outstanding volume per directed edge, indexed by EdgeId.
struct LoadMap {
  std::vector<double> load;

  LoadMap() = default;
  explicit LoadMap(const Network& net) : load(net.num_edges(), 0.0) {}

  double operator[](EdgeId e) const { return load[e]; }
  double& operator[](EdgeId e) { return load[e]; }
  int size() const { return static_cast<int>(load.size()); }
};

// Positive per-edge weights used for tree selection, indexed by EdgeId.
struct WeightMap {
  std::vector<double> weight;

  double operator[](EdgeId e) const { return weight[e]; }
  double& operator[](EdgeId e) { return weight[e]; }
  int size() const { return static_cast<int>(weight.size()); }
};

// Directed tree rooted at the sender. `edges` is sorted by EdgeId.
struct ForwardingTree {
  NodeId root = 0;
  std::vector<NodeId> terminals;  // sorted
  std::vector<EdgeId> edges;      // sorted

  bool operator==(const ForwardingTree&) const = default;
};

// W_e = L_e + volume for every edge. Throws std::invalid_argument when
// volume is not positive.
WeightMap ComputeWeights(const LoadMap& loads, double volume);

double TreeWeight(const ForwardingTree& tree, const WeightMap& w);

// Returns an empty string when `tree` is a valid arborescence over `net`
// rooted at tree.root that reaches every terminal and whose leaves are all
// terminals; otherwise a description of the first problem found.
std::string ValidateTree(const Network& net, const ForwardingTree& tree);

// Metric-closure heuristic: shortest paths between {root} u terminals,
// Prim's spanning tree over the closure grown from the root, path expansion,
// shortest-path arborescence inside the expanded subgraph, then pruning of
// non-terminal leaves. Within a factor two of optimal when weights are
// symmetric. Equal-weight shortest paths are resolved by the
// lexicographically smallest node sequence.
//
// Requires a non-empty terminal set that excludes the root.
ForwardingTree MinWeightSteinerTree(const Network& net, const WeightMap& w,
                                    NodeId root,
                                    const std::vector<NodeId>& terminals);

class OracleTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact minimum-weight Steiner arborescence by dynamic programming over
// terminal subsets. Accepts instances with |V| <= 12 or |terminals| <= 8 and
// throws OracleTooLarge otherwise. Meant for tests and small sweeps.
ForwardingTree ExactSteinerTree(const Network& net, const WeightMap& w,
                                NodeId root,
                                const std::vector<NodeId>& terminals);

}  // namespace treecast

#endif  // TREECAST_STEINER_H
