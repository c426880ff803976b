#include "treecast/network.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace treecast {

TopologyError::TopologyError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line) {}

namespace {

bool ReachesAll(int n, const std::vector<std::vector<NodeId>>& adj) {
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

}  // namespace

Network Network::FromLinks(int num_nodes, std::vector<Link> links) {
  if (num_nodes < 1) throw TopologyError("network needs at least one node");
  for (Link& l : links) {
    if (l.u < 0 || l.v < 0 || l.u >= num_nodes || l.v >= num_nodes) {
      throw TopologyError("link " + std::to_string(l.u) + "-" +
                          std::to_string(l.v) + " references unknown node");
    }
    if (l.u == l.v) {
      throw TopologyError("self loop at node " + std::to_string(l.u));
    }
    if (!(l.capacity > 0.0) || !std::isfinite(l.capacity)) {
      throw TopologyError("link " + std::to_string(l.u) + "-" +
                          std::to_string(l.v) + " has non-positive capacity");
    }
    if (l.u > l.v) std::swap(l.u, l.v);
  }
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (size_t i = 1; i < links.size(); ++i) {
    if (links[i].u == links[i - 1].u && links[i].v == links[i - 1].v) {
      throw TopologyError("duplicate link " + std::to_string(links[i].u) + "-" +
                          std::to_string(links[i].v));
    }
  }

  Network net;
  net.num_nodes_ = num_nodes;
  net.edges_.reserve(links.size() * 2);
  for (const Link& l : links) {
    net.edges_.push_back({l.u, l.v, l.capacity});
    net.edges_.push_back({l.v, l.u, l.capacity});
  }

  // Both directions of every link exist, so strong connectivity reduces to
  // connectivity of the undirected view.
  std::vector<std::vector<NodeId>> adj(num_nodes);
  for (const Edge& e : net.edges_) adj[e.tail].push_back(e.head);
  if (!ReachesAll(num_nodes, adj)) {
    throw TopologyError("network is not strongly connected");
  }

  net.out_offsets_.assign(num_nodes + 1, 0);
  for (const Edge& e : net.edges_) ++net.out_offsets_[e.tail + 1];
  for (int u = 0; u < num_nodes; ++u) {
    net.out_offsets_[u + 1] += net.out_offsets_[u];
  }
  net.out_index_.resize(net.edges_.size());
  std::vector<int> fill(net.out_offsets_.begin(), net.out_offsets_.end() - 1);
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    net.out_index_[fill[net.edges_[e].tail]++] = e;
  }
  // Sort each adjacency run by head for deterministic traversal order.
  for (int u = 0; u < num_nodes; ++u) {
    std::sort(net.out_index_.begin() + net.out_offsets_[u],
              net.out_index_.begin() + net.out_offsets_[u + 1],
              [&](EdgeId a, EdgeId b) {
                return net.edges_[a].head < net.edges_[b].head;
              });
  }
  return net;
}

std::span<const EdgeId> Network::out_edges(NodeId u) const {
  return std::span<const EdgeId>(out_index_).subspan(
      out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]);
}

std::optional<EdgeId> Network::find_edge(NodeId tail, NodeId head) const {
  if (tail < 0 || tail >= num_nodes_) return std::nullopt;
  for (EdgeId e : out_edges(tail)) {
    if (edges_[e].head == head) return e;
  }
  return std::nullopt;
}

std::vector<Link> Network::links() const {
  std::vector<Link> out;
  out.reserve(edges_.size() / 2);
  for (size_t i = 0; i < edges_.size(); i += 2) {
    out.push_back({edges_[i].tail, edges_[i].head, edges_[i].capacity});
  }
  return out;
}

Network LoadTopology(std::string_view text) {
  std::vector<Link> links;
  int max_node = -1;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string tok; in >> tok;) fields.push_back(tok);
    if (fields.empty()) continue;
    if (fields.size() < 2 || fields.size() > 3) {
      throw TopologyError("expected '<u> <v> [capacity]'", line_no);
    }
    auto parse_node = [&](const std::string& s) {
      NodeId id = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
      if (ec != std::errc() || ptr != s.data() + s.size() || id < 0) {
        throw TopologyError("bad node id '" + s + "'", line_no);
      }
      return id;
    };
    Link link;
    link.u = parse_node(fields[0]);
    link.v = parse_node(fields[1]);
    if (fields.size() == 3) {
      try {
        size_t used = 0;
        link.capacity = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw TopologyError("bad capacity '" + fields[2] + "'", line_no);
      }
      if (!(link.capacity > 0.0)) {
        throw TopologyError("capacity must be positive", line_no);
      }
    }
    if (link.u == link.v) throw TopologyError("self loop", line_no);
    max_node = std::max({max_node, link.u, link.v});
    links.push_back(link);
  }
  if (links.empty()) throw TopologyError("topology has no links");
  return Network::FromLinks(max_node + 1, std::move(links));
}

Network LoadTopologyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return LoadTopology(buf.str());
}

std::string SerializeTopology(const Network& net) {
  std::ostringstream out;
  out.precision(17);
  for (const Link& l : net.links()) {
    out << l.u << ' ' << l.v << ' ' << l.capacity << '\n';
  }
  return out.str();
}

Network GenerateRandomTopology(int num_nodes, int num_links, uint64_t seed) {
  if (num_nodes < 3) throw TopologyError("random topology needs >= 3 nodes");
  const int64_t max_links = int64_t{num_nodes} * (num_nodes - 1) / 2;
  if (num_links < num_nodes || num_links > max_links) {
    throw TopologyError("random topology needs " + std::to_string(num_nodes) +
                        " <= links <= " + std::to_string(max_links));
  }
  std::mt19937_64 rng(seed);
  std::vector<NodeId> order(num_nodes);
  for (int i = 0; i < num_nodes; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<Link> links;
  auto add = [&](NodeId a, NodeId b) {
    auto key = std::minmax(a, b);
    if (!used.insert(key).second) return false;
    links.push_back({key.first, key.second, 1.0});
    return true;
  };
  for (int i = 0; i < num_nodes; ++i) {
    add(order[i], order[(i + 1) % num_nodes]);
  }
  std::uniform_int_distribution<NodeId> pick(0, num_nodes - 1);
  while (static_cast<int>(links.size()) < num_links) {
    NodeId a = pick(rng);
    NodeId b = pick(rng);
    if (a != b) add(a, b);
  }
  return Network::FromLinks(num_nodes, std::move(links));
}

namespace {

// B4 site graph: 12 sites, 19 links. Ids 0-5 are North America, 6-7
// Europe, 8-11 Asia. The public drawings do not give an edge list, so the
// endpoints below follow the published map's adjacency as closely as it can
// be read; see data/gscale.txt.
constexpr std::string_view kGScale = R"(# GScale (B4) site graph: 12 nodes, 19 links
0 1 1.0
0 2 1.0
1 2 1.0
1 3 1.0
2 4 1.0
2 6 1.0
3 4 1.0
3 5 1.0
4 5 1.0
4 6 1.0
5 7 1.0
5 8 1.0
6 7 1.0
6 8 1.0
7 9 1.0
8 9 1.0
8 10 1.0
9 11 1.0
10 11 1.0
)";

// Weakest-link example. Sources 0 (blue) and 1 (green) both reach the left
// receivers 4 and 5 through the shared edge 2->3. Green's right receivers
// 6 and 7 hang directly off node 1.
constexpr std::string_view kFig1 = R"(# two senders sharing link 2->3
0 2 1.0
1 2 1.0
2 3 1.0
3 4 1.0
3 5 1.0
1 6 1.0
1 7 1.0
)";

// Four senders 0..3. For every pair {i,j} there is a gateway a and a leaf b
// (a-b link) that both senders' trees must cross, so every pair of
// transfers contends on exactly one edge. Pairs in order (0,1) (0,2) (0,3)
// (1,2) (1,3) (2,3) use gateways 4,6,8,10,12,14 and leaves 5,7,...,15.
constexpr std::string_view kFig4 = R"(# pairwise-contention policy example
0 4 1.0
1 4 1.0
4 5 1.0
0 6 1.0
2 6 1.0
6 7 1.0
0 8 1.0
3 8 1.0
8 9 1.0
1 10 1.0
2 10 1.0
10 11 1.0
1 12 1.0
3 12 1.0
12 13 1.0
2 14 1.0
3 14 1.0
14 15 1.0
)";

}  // namespace

std::string_view BuiltinTopologyText(std::string_view name) {
  if (name == "gscale") return kGScale;
  if (name == "fig1") return kFig1;
  if (name == "fig4") return kFig4;
  throw TopologyError("unknown builtin topology '" + std::string(name) + "'");
}

Network BuiltinTopology(std::string_view name) {
  return LoadTopology(BuiltinTopologyText(name));
}

std::vector<std::string> BuiltinTopologyNames() {
  return {"fig1", "fig4", "gscale"};
}

DistanceMatrix HopDistances(const Network& net) {
  const int n = net.num_nodes();
  DistanceMatrix dist(n);
  std::vector<int> level(n);
  std::queue<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(level.begin(), level.end(), -1);
    level[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop();
      for (EdgeId e : net.out_edges(u)) {
        NodeId v = net.edge(e).head;
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push(v);
        }
      }
    }
    for (NodeId v = 0; v < n; ++v) dist.at(s, v) = level[v];
  }
  return dist;
}

}  // namespace treecast
