#include "treecast/rates.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace treecast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<size_t> SortedByKey(std::span<const PartitionJob> jobs) {
  std::vector<size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return JobKeyLess(jobs[a], jobs[b]);
  });
  return order;
}

void CheckSlot(double slot) {
  if (!(slot > 0.0)) throw std::invalid_argument("slot length must be > 0");
}

RateVector GreedyFill(std::span<const PartitionJob> jobs, const Network& net,
                      double slot, const std::vector<size_t>& order) {
  std::vector<double> cap(net.num_edges());
  for (EdgeId e = 0; e < net.num_edges(); ++e) cap[e] = net.edge(e).capacity;
  RateVector rates(jobs.size(), 0.0);
  for (size_t i : order) {
    const PartitionJob& job = jobs[i];
    double r = job.residual / slot;
    for (EdgeId e : job.tree.edges) r = std::min(r, cap[e]);
    r = std::max(r, 0.0);
    for (EdgeId e : job.tree.edges) cap[e] -= r;
    rates[i] = r;
  }
  return rates;
}

}  // namespace

Policy ParsePolicy(std::string_view name) {
  if (name == "mmf" || name == "fair") return Policy::kMaxMinFair;
  if (name == "fcfs") return Policy::kFcfs;
  if (name == "srpt") return Policy::kSrpt;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::string_view PolicyName(Policy p) {
  switch (p) {
    case Policy::kMaxMinFair:
      return "mmf";
    case Policy::kFcfs:
      return "fcfs";
    case Policy::kSrpt:
      return "srpt";
  }
  return "?";
}

// The minimum share over all jobs equals the minimum CAP_e / COUNT_e over
// edges still carrying unfrozen jobs, so the search runs over an edge heap
// instead of rescanning every job. All unfrozen jobs on the bottleneck edge
// share that minimum; they are frozen one at a time in key order, each at
// its share recomputed at freeze time. Jobs whose demand sits at or below
// the current water level are frozen first, at their demand.
RateVector DispatchMaxMinFair(std::span<const PartitionJob> jobs,
                              const Network& net, double slot) {
  CheckSlot(slot);
  const int num_edges = net.num_edges();
  const std::vector<size_t> order = SortedByKey(jobs);

  std::vector<double> cap(num_edges);
  std::vector<int> count(num_edges, 0);
  std::vector<std::vector<size_t>> on_edge(num_edges);
  for (EdgeId e = 0; e < num_edges; ++e) cap[e] = net.edge(e).capacity;
  for (size_t i : order) {
    for (EdgeId e : jobs[i].tree.edges) {
      ++count[e];
      on_edge[e].push_back(i);
    }
  }

  using EdgeItem = std::pair<double, EdgeId>;
  std::priority_queue<EdgeItem, std::vector<EdgeItem>, std::greater<>> edges;
  std::vector<double> level(num_edges, kInf);
  auto refresh = [&](EdgeId e) {
    level[e] = count[e] > 0 ? std::max(cap[e], 0.0) / count[e] : kInf;
    if (count[e] > 0) edges.push({level[e], e});
  };
  for (EdgeId e = 0; e < num_edges; ++e) refresh(e);

  // Demand order: (demand, key).
  std::vector<size_t> by_demand = order;
  std::stable_sort(by_demand.begin(), by_demand.end(), [&](size_t a, size_t b) {
    return jobs[a].residual < jobs[b].residual;
  });
  size_t demand_pos = 0;

  RateVector rates(jobs.size(), 0.0);
  std::vector<char> frozen(jobs.size(), 0);
  size_t remaining = jobs.size();

  auto freeze = [&](size_t i) {
    const PartitionJob& job = jobs[i];
    double share = kInf;
    for (EdgeId e : job.tree.edges) share = std::min(share, level[e]);
    double r = std::max(0.0, std::min(share, job.residual / slot));
    rates[i] = r;
    frozen[i] = 1;
    --remaining;
    for (EdgeId e : job.tree.edges) {
      --count[e];
      cap[e] -= r;
      refresh(e);
    }
  };

  while (remaining > 0) {
    while (!edges.empty() &&
           (count[edges.top().second] == 0 ||
            edges.top().first != level[edges.top().second])) {
      edges.pop();
    }
    while (demand_pos < by_demand.size() && frozen[by_demand[demand_pos]]) {
      ++demand_pos;
    }
    const double water = edges.empty() ? kInf : edges.top().first;
    if (demand_pos < by_demand.size() &&
        jobs[by_demand[demand_pos]].residual / slot <= water) {
      freeze(by_demand[demand_pos]);
      continue;
    }
    if (edges.empty()) {
      for (size_t i : order) {
        if (!frozen[i]) freeze(i);
      }
      break;
    }
    const EdgeId bottleneck = edges.top().second;
    for (size_t i : on_edge[bottleneck]) {
      if (!frozen[i]) freeze(i);
    }
  }
  return rates;
}

RateVector DispatchFcfs(std::span<const PartitionJob> jobs, const Network& net,
                        double slot) {
  CheckSlot(slot);
  return GreedyFill(jobs, net, slot, SortedByKey(jobs));
}

RateVector DispatchSrpt(std::span<const PartitionJob> jobs, const Network& net,
                        double slot, SrptRanking ranking) {
  CheckSlot(slot);
  std::vector<size_t> order = SortedByKey(jobs);
  // Summed in key order so the result does not depend on input order.
  std::map<RequestId, double> request_residual;
  for (size_t i : order) request_residual[jobs[i].request] += jobs[i].residual;
  auto remaining = [&](const PartitionJob& job) {
    return ranking == SrptRanking::kPerRequest
               ? request_residual.at(job.request)
               : job.residual;
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return remaining(jobs[a]) < remaining(jobs[b]);
  });
  return GreedyFill(jobs, net, slot, order);
}

RateVector Dispatch(Policy policy, std::span<const PartitionJob> jobs,
                    const Network& net, double slot, SrptRanking ranking) {
  switch (policy) {
    case Policy::kMaxMinFair:
      return DispatchMaxMinFair(jobs, net, slot);
    case Policy::kFcfs:
      return DispatchFcfs(jobs, net, slot);
    case Policy::kSrpt:
      return DispatchSrpt(jobs, net, slot, ranking);
  }
  throw std::invalid_argument("unknown policy");
}

}  // namespace treecast
