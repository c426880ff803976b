#ifndef TREECAST_RATES_H
#define TREECAST_RATES_H

#include <span>
#include <string_view>
#include <vector>

#include "treecast/cohort.h"
#include "treecast/network.h"

namespace treecast {

enum class Policy { kMaxMinFair, kFcfs, kSrpt };

Policy ParsePolicy(std::string_view name);
std::string_view PolicyName(Policy p);

enum class SrptRanking { kPerRequest, kPerPartition };

// rates[i] is the rate of jobs[i], in volume per timeslot.
using RateVector = std::vector<double>;

// Progressive filling over forwarding trees. Each round the job with the
// smallest share min_e(CAP_e / COUNT_e), capped by its own demand
// residual/slot, is frozen at that share and removed from COUNT_e and CAP_e
// on its edges. Ties go to the earliest (arrival, request, partition).
RateVector DispatchMaxMinFair(std::span<const PartitionJob> jobs,
                              const Network& net, double slot);

// Greedy in (arrival, request, partition) order: each job takes
// min(residual/slot, smallest remaining capacity on its tree).
RateVector DispatchFcfs(std::span<const PartitionJob> jobs, const Network& net,
                        double slot);

// Same greedy fill ordered by remaining volume. kPerRequest ranks by the sum
// of residuals over the request's active partitions in `jobs`, so all
// partitions of a request share one priority; ties fall back to arrival,
// then request id, then partition index.
RateVector DispatchSrpt(std::span<const PartitionJob> jobs, const Network& net,
                        double slot,
                        SrptRanking ranking = SrptRanking::kPerRequest);

RateVector Dispatch(Policy policy, std::span<const PartitionJob> jobs,
                    const Network& net, double slot,
                    SrptRanking ranking = SrptRanking::kPerRequest);

}  // namespace treecast

#endif  // TREECAST_RATES_H
