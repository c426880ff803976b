#include "treecast/steiner.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace treecast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

void CheckTerminals(const Network& net, NodeId root,
                    const std::vector<NodeId>& terminals) {
  if (root < 0 || root >= net.num_nodes()) {
    throw std::invalid_argument("steiner: root out of range");
  }
  if (terminals.empty()) {
    throw std::invalid_argument("steiner: terminal set is empty");
  }
  std::vector<NodeId> sorted = terminals;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("steiner: duplicate terminal");
  }
  for (NodeId t : sorted) {
    if (t < 0 || t >= net.num_nodes()) {
      throw std::invalid_argument("steiner: terminal out of range");
    }
    if (t == root) throw std::invalid_argument("steiner: root is a terminal");
  }
}

// Single-source shortest paths where equal-length paths are ordered by their
// node sequence. Only edges with allowed[e] set are used (all when empty).
struct PathTree {
  std::vector<double> dist;
  std::vector<EdgeId> parent;  // edge entering the node, -1 at source

  std::vector<NodeId> NodesTo(const Network& net, NodeId v) const {
    std::vector<NodeId> seq;
    for (; parent[v] >= 0; v = net.edge(parent[v]).tail) seq.push_back(v);
    seq.push_back(v);
    std::reverse(seq.begin(), seq.end());
    return seq;
  }
};

PathTree ShortestPaths(const Network& net, const WeightMap& w, NodeId source,
                       const std::vector<char>& allowed = {}) {
  const int n = net.num_nodes();
  PathTree pt{std::vector<double>(n, kInf), std::vector<EdgeId>(n, -1)};
  std::vector<char> done(n, 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  pt.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d > pt.dist[u]) continue;
    done[u] = 1;
    for (EdgeId e : net.out_edges(u)) {
      if (!allowed.empty() && !allowed[e]) continue;
      NodeId v = net.edge(e).head;
      if (done[v]) continue;
      double cand = d + w[e];
      bool better = false;
      if (pt.parent[v] < 0 && v != source) {
        better = true;
      } else if (NearlyEqual(cand, pt.dist[v])) {
        // Both candidates end in v, so compare the prefixes.
        NodeId old_tail = net.edge(pt.parent[v]).tail;
        better = pt.NodesTo(net, u) < pt.NodesTo(net, old_tail);
      } else {
        better = cand < pt.dist[v];
      }
      if (better) {
        pt.dist[v] = std::min(cand, pt.dist[v]);
        pt.parent[v] = e;
        heap.push({pt.dist[v], v});
      }
    }
  }
  return pt;
}

// Reduce an edge set that already connects root to every terminal to a
// clean arborescence: shortest-path tree inside the subgraph, then strip
// non-terminal leaves.
ForwardingTree Arborescence(const Network& net, const WeightMap& w,
                            NodeId root, const std::vector<NodeId>& terminals,
                            const std::vector<char>& allowed) {
  PathTree pt = ShortestPaths(net, w, root, allowed);
  const int n = net.num_nodes();
  std::vector<char> keep(n, 0);
  for (NodeId t : terminals) {
    for (NodeId v = t; !keep[v]; v = net.edge(pt.parent[v]).tail) {
      keep[v] = 1;
      if (v == root) break;
      if (pt.parent[v] < 0) throw std::logic_error("steiner: terminal cut off");
    }
  }
  ForwardingTree tree;
  tree.root = root;
  tree.terminals = terminals;
  std::sort(tree.terminals.begin(), tree.terminals.end());
  for (NodeId v = 0; v < n; ++v) {
    if (keep[v] && v != root) tree.edges.push_back(pt.parent[v]);
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

}  // namespace

WeightMap ComputeWeights(const LoadMap& loads, double volume) {
  if (!(volume > 0.0)) {
    throw std::invalid_argument("weights: volume must be positive");
  }
  WeightMap w;
  w.weight.resize(loads.load.size());
  for (size_t e = 0; e < loads.load.size(); ++e) {
    w.weight[e] = loads.load[e] + volume;
  }
  return w;
}

double TreeWeight(const ForwardingTree& tree, const WeightMap& w) {
  double total = 0.0;
  for (EdgeId e : tree.edges) total += w[e];
  return total;
}

std::string ValidateTree(const Network& net, const ForwardingTree& tree) {
  const int n = net.num_nodes();
  if (tree.root < 0 || tree.root >= n) return "root out of range";
  std::vector<int> indeg(n, 0), outdeg(n, 0);
  std::vector<EdgeId> parent(n, -1);
  std::vector<char> in_tree(n, 0);
  in_tree[tree.root] = 1;
  for (size_t i = 0; i < tree.edges.size(); ++i) {
    EdgeId e = tree.edges[i];
    if (e < 0 || e >= net.num_edges()) return "edge id out of range";
    if (i > 0 && tree.edges[i - 1] >= e) return "edges not sorted and unique";
    const Edge& ed = net.edge(e);
    ++indeg[ed.head];
    ++outdeg[ed.tail];
    parent[ed.head] = e;
    in_tree[ed.head] = in_tree[ed.tail] = 1;
  }
  if (indeg[tree.root] != 0) return "root has an incoming edge";
  for (NodeId v = 0; v < n; ++v) {
    if (in_tree[v] && v != tree.root && indeg[v] != 1) {
      std::ostringstream msg;
      msg << "node " << v << " has in-degree " << indeg[v];
      return msg.str();
    }
  }
  // Walking parents from every node must reach the root without revisiting.
  for (NodeId v = 0; v < n; ++v) {
    if (!in_tree[v]) continue;
    int steps = 0;
    for (NodeId x = v; x != tree.root; x = net.edge(parent[x]).tail) {
      if (++steps > n) return "cycle in tree";
    }
  }
  std::vector<char> is_terminal(n, 0);
  for (NodeId t : tree.terminals) {
    if (t < 0 || t >= n) return "terminal out of range";
    if (t == tree.root) return "root listed as terminal";
    if (!in_tree[t]) {
      return "terminal " + std::to_string(t) + " not reached";
    }
    is_terminal[t] = 1;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (in_tree[v] && v != tree.root && outdeg[v] == 0 && !is_terminal[v]) {
      return "non-terminal leaf " + std::to_string(v);
    }
  }
  return {};
}

ForwardingTree MinWeightSteinerTree(const Network& net, const WeightMap& w,
                                    NodeId root,
                                    const std::vector<NodeId>& terminals) {
  CheckTerminals(net, root, terminals);
  std::vector<NodeId> keys = {root};
  std::vector<NodeId> sorted_terms = terminals;
  std::sort(sorted_terms.begin(), sorted_terms.end());
  keys.insert(keys.end(), sorted_terms.begin(), sorted_terms.end());
  const int k = static_cast<int>(keys.size());

  std::vector<PathTree> paths;
  paths.reserve(k);
  for (NodeId s : keys) paths.push_back(ShortestPaths(net, w, s));

  // Prim over the metric closure, always measuring from a key already in
  // the tree toward the candidate so paths point away from the root.
  std::vector<char> attached(k, 0);
  std::vector<double> best(k, kInf);
  std::vector<int> via(k, -1);
  attached[0] = 1;
  for (int b = 1; b < k; ++b) {
    best[b] = paths[0].dist[keys[b]];
    via[b] = 0;
  }
  std::vector<char> allowed(net.num_edges(), 0);
  for (int step = 1; step < k; ++step) {
    int pick = -1;
    for (int b = 1; b < k; ++b) {
      if (attached[b]) continue;
      if (pick < 0 ||
          (best[b] < best[pick] && !NearlyEqual(best[b], best[pick]))) {
        pick = b;
      }
    }
    attached[pick] = 1;
    const PathTree& from = paths[via[pick]];
    for (NodeId v = keys[pick]; from.parent[v] >= 0;
         v = net.edge(from.parent[v]).tail) {
      allowed[from.parent[v]] = 1;
    }
    for (int b = 1; b < k; ++b) {
      if (attached[b]) continue;
      double d = paths[pick].dist[keys[b]];
      if (d < best[b] && !NearlyEqual(d, best[b])) {
        best[b] = d;
        via[b] = pick;
      }
    }
  }
  return Arborescence(net, w, root, sorted_terms, allowed);
}

ForwardingTree ExactSteinerTree(const Network& net, const WeightMap& w,
                                NodeId root,
                                const std::vector<NodeId>& terminals) {
  CheckTerminals(net, root, terminals);
  const int n = net.num_nodes();
  const int m = static_cast<int>(terminals.size());
  if (!(n <= 12 || m <= 8) || m > 16) {
    throw OracleTooLarge("exact steiner: instance too large");
  }
  std::vector<NodeId> terms = terminals;
  std::sort(terms.begin(), terms.end());

  // All-pairs directed distances with next-hop edges.
  std::vector<double> d(static_cast<size_t>(n) * n, kInf);
  std::vector<EdgeId> first(static_cast<size_t>(n) * n, -1);
  auto at = [n](int u, int v) { return static_cast<size_t>(u) * n + v; };
  for (NodeId u = 0; u < n; ++u) d[at(u, u)] = 0.0;
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    const Edge& ed = net.edge(e);
    if (w[e] < d[at(ed.tail, ed.head)]) {
      d[at(ed.tail, ed.head)] = w[e];
      first[at(ed.tail, ed.head)] = e;
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int u = 0; u < n; ++u) {
      if (d[at(u, x)] == kInf) continue;
      for (int v = 0; v < n; ++v) {
        double cand = d[at(u, x)] + d[at(x, v)];
        if (cand < d[at(u, v)]) {
          d[at(u, v)] = cand;
          first[at(u, v)] = first[at(u, x)];
        }
      }
    }
  }

  const int full = (1 << m) - 1;
  const size_t states = static_cast<size_t>(full + 1) * n;
  std::vector<double> dp(states, kInf);     // tree rooted at v spanning S
  std::vector<double> merge(states, kInf);  // v has >= 2 subtrees
  std::vector<int> split(states, 0);
  std::vector<NodeId> hop(states, -1);
  auto idx = [n](int s, int v) { return static_cast<size_t>(s) * n + v; };

  for (int i = 0; i < m; ++i) {
    for (NodeId v = 0; v < n; ++v) {
      dp[idx(1 << i, v)] = d[at(v, terms[i])];
      hop[idx(1 << i, v)] = terms[i];
    }
  }
  for (int s = 1; s <= full; ++s) {
    if ((s & (s - 1)) == 0) continue;
    const int low = s & -s;
    for (NodeId v = 0; v < n; ++v) {
      double best = kInf;
      int best_sub = 0;
      // Subsets containing the lowest bit enumerate each split once.
      for (int sub = (s - 1) & s; sub > 0; sub = (sub - 1) & s) {
        if (!(sub & low)) continue;
        double c = dp[idx(sub, v)] + dp[idx(s ^ sub, v)];
        if (c < best) {
          best = c;
          best_sub = sub;
        }
      }
      merge[idx(s, v)] = best;
      split[idx(s, v)] = best_sub;
    }
    for (NodeId v = 0; v < n; ++v) {
      double best = kInf;
      NodeId best_u = -1;
      for (NodeId u = 0; u < n; ++u) {
        double c = d[at(v, u)] + merge[idx(s, u)];
        if (c < best) {
          best = c;
          best_u = u;
        }
      }
      dp[idx(s, v)] = best;
      hop[idx(s, v)] = best_u;
    }
  }

  std::vector<char> allowed(net.num_edges(), 0);
  auto add_path = [&](NodeId u, NodeId v) {
    while (u != v) {
      EdgeId e = first[at(u, v)];
      allowed[e] = 1;
      u = net.edge(e).head;
    }
  };
  std::function<void(int, NodeId)> build = [&](int s, NodeId v) {
    NodeId u = hop[idx(s, v)];
    add_path(v, u);
    if ((s & (s - 1)) == 0) return;
    int sub = split[idx(s, u)];
    build(sub, u);
    build(s ^ sub, u);
  };
  build(full, root);
  return Arborescence(net, w, root, terms, allowed);
}

}  // namespace treecast
