#include "treecast/cohort.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace treecast {

namespace {

constexpr double kTolerance = 1e-9;

PartitionJob MakeJob(const TransferRequest& req, int index,
                     ForwardingTree tree) {
  PartitionJob job;
  job.request = req.id;
  job.index = index;
  job.arrival = req.arrival;
  job.receivers = tree.terminals;
  job.tree = std::move(tree);
  job.volume = req.volume;
  job.residual = req.volume;
  return job;
}

void AddLoad(const ForwardingTree& tree, double volume, LoadMap& loads) {
  for (EdgeId e : tree.edges) loads[e] += volume;
}

std::vector<std::vector<NodeId>> RandomSplit(const TransferRequest& req,
                                             uint64_t seed) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL *
                              static_cast<uint64_t>(req.id + 1)));
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<NodeId>> groups(2);
  for (NodeId r : req.receivers) groups[coin(rng) ? 1 : 0].push_back(r);
  if (groups[0].empty() || groups[1].empty()) return {};
  if (groups[0].front() > groups[1].front()) std::swap(groups[0], groups[1]);
  return groups;
}

}  // namespace

void ValidateRequest(const Network& net, const TransferRequest& req) {
  if (!(req.volume > 0.0) || !std::isfinite(req.volume)) {
    throw std::invalid_argument("request volume must be positive");
  }
  if (req.source < 0 || req.source >= net.num_nodes()) {
    throw std::invalid_argument("request source out of range");
  }
  if (req.receivers.empty()) {
    throw std::invalid_argument("request has no receivers");
  }
  for (size_t i = 0; i < req.receivers.size(); ++i) {
    NodeId r = req.receivers[i];
    if (r < 0 || r >= net.num_nodes()) {
      throw std::invalid_argument("receiver out of range");
    }
    if (r == req.source) throw std::invalid_argument("source is a receiver");
    if (i > 0 && req.receivers[i - 1] >= r) {
      throw std::invalid_argument("receivers must be sorted and distinct");
    }
  }
}

std::vector<std::vector<NodeId>> ClusterHierarchy::Cut(int k) const {
  const int m = static_cast<int>(items_.size());
  if (k < 1 || k > m) throw std::invalid_argument("cut level out of range");
  // Replay the first m - k merges.
  std::vector<std::vector<NodeId>> clusters(m + merges_.size());
  std::vector<char> alive(clusters.size(), 0);
  for (int i = 0; i < m; ++i) {
    clusters[i] = {items_[i]};
    alive[i] = 1;
  }
  for (int i = 0; i < m - k; ++i) {
    const Merge& mg = merges_[i];
    auto& out = clusters[m + i];
    out = clusters[mg.left];
    out.insert(out.end(), clusters[mg.right].begin(), clusters[mg.right].end());
    std::sort(out.begin(), out.end());
    alive[mg.left] = alive[mg.right] = 0;
    alive[m + i] = 1;
  }
  std::vector<std::vector<NodeId>> result;
  for (size_t c = 0; c < clusters.size(); ++c) {
    if (alive[c]) result.push_back(clusters[c]);
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return result;
}

ClusterHierarchy Agglomerate(const std::vector<NodeId>& receivers,
                             const PairDistance& distance) {
  if (receivers.empty()) {
    throw std::invalid_argument("cannot cluster an empty receiver set");
  }
  std::vector<NodeId> items = receivers;
  std::sort(items.begin(), items.end());
  const int m = static_cast<int>(items.size());

  struct Cluster {
    int id;
    NodeId min_member;
    std::vector<NodeId> members;
  };
  std::vector<Cluster> active;
  for (int i = 0; i < m; ++i) active.push_back({i, items[i], {items[i]}});

  // Pairwise sums of distances between active clusters, keyed by id.
  std::map<std::pair<int, int>, double> sum;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) sum[{i, j}] = distance(items[i], items[j]);
  }
  auto pair_sum = [&](int a, int b) {
    return sum.at({std::min(a, b), std::max(a, b)});
  };

  std::vector<ClusterHierarchy::Merge> merges;
  int next_id = m;
  while (active.size() > 1) {
    size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<NodeId, NodeId> best_key{};
    for (size_t a = 0; a < active.size(); ++a) {
      for (size_t b = a + 1; b < active.size(); ++b) {
        double avg = pair_sum(active[a].id, active[b].id) /
                     (static_cast<double>(active[a].members.size()) *
                      active[b].members.size());
        std::pair<NodeId, NodeId> key = std::minmax(active[a].min_member, active[b].min_member);
        bool tie = std::abs(avg - best) <= kTolerance;
        if ((!tie && avg < best) || (tie && key < best_key)) {
          best = avg;
          best_a = a;
          best_b = b;
          best_key = key;
        }
      }
    }
    Cluster& ca = active[best_a];
    Cluster& cb = active[best_b];
    int left = ca.id, right = cb.id;
    if (cb.min_member < ca.min_member) std::swap(left, right);
    merges.push_back({left, right, best});

    Cluster merged{next_id, std::min(ca.min_member, cb.min_member), {}};
    merged.members = ca.members;
    merged.members.insert(merged.members.end(), cb.members.begin(),
                          cb.members.end());
    for (const Cluster& other : active) {
      if (other.id == ca.id || other.id == cb.id) continue;
      sum[{other.id, next_id}] =
          pair_sum(other.id, ca.id) + pair_sum(other.id, cb.id);
    }
    active.erase(active.begin() + best_b);
    active.erase(active.begin() + best_a);
    active.push_back(std::move(merged));
    ++next_id;
  }
  return ClusterHierarchy(std::move(items), std::move(merges));
}

ClusterHierarchy Agglomerate(const std::vector<NodeId>& receivers,
                             const DistanceMatrix& dist) {
  return Agglomerate(receivers, [&dist](NodeId a, NodeId b) {
    return static_cast<double>(dist(a, b));
  });
}

SubmitResult Submit(const TransferRequest& req, const SubmitOptions& opts,
                    const Network& net, LoadMap& loads,
                    const DistanceMatrix& dist) {
  ValidateRequest(net, req);
  if (opts.max_partitions < 1) {
    throw std::invalid_argument("max_partitions must be >= 1");
  }
  if (!(opts.partition_factor >= 1.0)) {
    throw std::invalid_argument("partition_factor must be >= 1");
  }

  SubmitResult result;
  WeightMap w = ComputeWeights(loads, req.volume);
  ForwardingTree single =
      MinWeightSteinerTree(net, w, req.source, req.receivers);
  result.single_tree_weight = TreeWeight(single, w);
  result.single_tree_edges = static_cast<int>(single.edges.size());
  result.accepted_weight = result.single_tree_weight;

  const int m = static_cast<int>(req.receivers.size());
  const int top = std::min(opts.max_partitions, m);
  const double budget = opts.partition_factor * result.single_tree_weight;

  auto candidates = [&](int k) -> std::vector<std::vector<NodeId>> {
    switch (opts.strategy) {
      case PartitionStrategy::kRandomSplit:
        // Random splitting only defines a two-way split.
        return k == 2 ? RandomSplit(req, opts.seed)
                      : std::vector<std::vector<NodeId>>{};
      case PartitionStrategy::kSourceDistance: {
        auto h = Agglomerate(req.receivers, [&](NodeId a, NodeId b) {
          return std::abs(static_cast<double>(dist(req.source, a)) -
                          dist(req.source, b));
        });
        return h.Cut(k);
      }
      case PartitionStrategy::kProximity:
        break;
    }
    return Agglomerate(req.receivers, dist).Cut(k);
  };

  for (int k = top; k >= 2; --k) {
    std::vector<std::vector<NodeId>> groups = candidates(k);
    if (groups.empty()) continue;
    double total = 0.0;
    for (const auto& g : groups) {
      total += TreeWeight(MinWeightSteinerTree(net, w, req.source, g), w);
    }
    bool accept = std::isinf(opts.partition_factor) ||
                  total <= budget + kTolerance * std::max(1.0, budget);
    if (!accept) continue;

    result.accepted_weight = total;
    for (size_t i = 0; i < groups.size(); ++i) {
      if (i > 0) w = ComputeWeights(loads, req.volume);
      ForwardingTree tree =
          MinWeightSteinerTree(net, w, req.source, groups[i]);
      AddLoad(tree, req.volume, loads);
      result.jobs.push_back(MakeJob(req, static_cast<int>(i) + 1, tree));
    }
    return result;
  }

  AddLoad(single, req.volume, loads);
  result.jobs.push_back(MakeJob(req, 1, std::move(single)));
  return result;
}

void ReleaseLoad(PartitionJob& job, double delivered, LoadMap& loads) {
  if (!(delivered >= 0.0)) {
    throw std::invalid_argument("delivered volume must be non-negative");
  }
  if (delivered > job.residual + kTolerance) {
    throw std::invalid_argument("delivered volume exceeds residual");
  }
  delivered = std::min(delivered, job.residual);
  job.residual -= delivered;
  if (job.residual < kTolerance) {
    // Release the exact remaining contribution so loads return to zero.
    delivered += job.residual;
    job.residual = 0.0;
  }
  for (EdgeId e : job.tree.edges) {
    loads[e] -= delivered;
    if (loads[e] < kTolerance) loads[e] = 0.0;
  }
}

}  // namespace treecast
