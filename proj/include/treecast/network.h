#ifndef TREECAST_NETWORK_H
#define TREECAST_NETWORK_H

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treecast {

using NodeId = int32_t;
using EdgeId = int32_t;

// Raised for malformed topology text or graphs that violate the Network
// invariants. line() is 0 when the error is not tied to a specific line.
class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

// One directed WAN edge. Capacity is volume per timeslot.
struct Edge {
  NodeId tail = 0;
  NodeId head = 0;
  double capacity = 1.0;

  bool operator==(const Edge&) const = default;
};

// An undirected link as it appears in topology files; expands to two
// directed edges of equal capacity.
struct Link {
  NodeId u = 0;
  NodeId v = 0;
  double capacity = 1.0;
};

// Directed capacitated graph of datacenters. Immutable once built.
//
// Every link is stored as a pair of directed edges. Edges are ordered
// canonically by (min endpoint, max endpoint) of their link and within a
// link the low->high direction comes first, so edge 2k and 2k+1 are reverses
// of each other. Two networks built from the same link set in any order are
// therefore identical.
class Network {
 public:
  Network() = default;

  // Validates and builds. Throws TopologyError on self loops, duplicate
  // links, non-positive capacity, nodes outside [0, num_nodes), or a graph
  // that is not strongly connected.
  static Network FromLinks(int num_nodes, std::vector<Link> links);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_links() const { return num_edges() / 2; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeId> out_edges(NodeId u) const;

  EdgeId reverse(EdgeId e) const { return e ^ 1; }
  std::optional<EdgeId> find_edge(NodeId tail, NodeId head) const;

  // One entry per undirected link, u < v, in canonical order.
  std::vector<Link> links() const;

  bool operator==(const Network& other) const {
    return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
  }

 private:
  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> out_offsets_;
  std::vector<EdgeId> out_index_;
};

// Parses the edge-list format: one "<u> <v> <capacity>" link per line, '#'
// starts a comment, blank lines are ignored. The capacity column may be
// omitted, in which case it defaults to 1.0.
Network LoadTopology(std::string_view text);
Network LoadTopologyFile(const std::string& path);

// Sorted, one link per line. LoadTopology(SerializeTopology(n)) == n.
std::string SerializeTopology(const Network& net);

// Random Hamiltonian cycle plus uniformly drawn extra links. Unit capacity.
// Requires num_nodes >= 3 and num_nodes <= num_links <= n(n-1)/2.
Network GenerateRandomTopology(int num_nodes, int num_links, uint64_t seed);

// Named topologies bundled with the library ("gscale", "fig1", "fig4").
Network BuiltinTopology(std::string_view name);
std::string_view BuiltinTopologyText(std::string_view name);
std::vector<std::string> BuiltinTopologyNames();

// All-pairs hop counts on the undirected view.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), dist_(static_cast<size_t>(n) * n, 0) {}

  int size() const { return n_; }
  int operator()(NodeId u, NodeId v) const { return dist_[index(u, v)]; }
  int& at(NodeId u, NodeId v) { return dist_[index(u, v)]; }

  bool operator==(const DistanceMatrix&) const = default;

 private:
  size_t index(NodeId u, NodeId v) const {
    return static_cast<size_t>(u) * n_ + v;
  }

  int n_ = 0;
  std::vector<int> dist_;
};

DistanceMatrix HopDistances(const Network& net);

}  // namespace treecast

#endif  // TREECAST_NETWORK_H
