#ifndef TREECAST_CONFIG_H
#define TREECAST_CONFIG_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treecast/cohort.h"
#include "treecast/rates.h"

namespace treecast {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tree-selection schemes. Each implies a partition limit, a partitioning
// factor and a default rate policy:
//   dccast        single tree, FCFS
//   quickcast_np  single tree, max-min fair
//   quickcast_two always split up to max_partitions, max-min fair
//   quickcast     selective split under the partitioning factor, max-min fair
enum class Scheme { kQuickCast, kQuickCastNp, kQuickCastTwo, kDcCast };

Scheme ParseScheme(std::string_view name);
std::string_view SchemeName(Scheme s);

enum class SizeDistribution { kExponential, kPareto, kLogNormal };

// kPoisson draws requests; the others replay fixed scenarios.
enum class WorkloadKind { kPoisson, kFig1, kFig4, kTrace };

std::string_view StrategyName(PartitionStrategy s);

struct SimConfig {
  // "random", a builtin name (gscale, fig1, fig4) or a path to an edge list.
  std::string topology = "random";
  int random_nodes = 50;
  int random_links = 150;
  std::optional<uint64_t> topology_seed;  // defaults to `seed`

  Scheme scheme = Scheme::kQuickCast;
  std::optional<Policy> policy;  // unset: the scheme's default
  SrptRanking srpt_ranking = SrptRanking::kPerRequest;
  PartitionStrategy strategy = PartitionStrategy::kProximity;
  int max_partitions = 2;
  double partition_factor = 1.1;

  WorkloadKind workload = WorkloadKind::kPoisson;
  std::string trace_path;
  double arrival_rate = 1.0;  // requests per slot
  SizeDistribution size_dist = SizeDistribution::kExponential;
  double size_mean = 20.0;
  double size_min = 2.0;
  double size_max = 2000.0;
  double lognormal_sigma = 2.0;
  int receivers = 10;

  double slot = 1.0;       // timeslot length
  int64_t slots = 1000;    // arrivals are drawn in [0, slots)
  int64_t warmup = 0;      // requests arriving earlier are not counted
  uint64_t seed = 1;

  bool check_invariants = true;
  bool record_edge_history = true;

  Policy effective_policy() const;
  SubmitOptions submit_options() const;
  uint64_t effective_topology_seed() const { return topology_seed.value_or(seed); }
};

// Throws ConfigError when fields are out of range.
void ValidateConfig(const SimConfig& cfg);

// Sets one field from its text form. Throws ConfigError on unknown keys or
// unparsable values.
void SetConfigValue(SimConfig& cfg, std::string_view key,
                    std::string_view value);

// Parses "key = value" lines; '#' starts a comment. Later keys win.
SimConfig ParseConfig(std::string_view text, SimConfig base = {});
SimConfig LoadConfigFile(const std::string& path, SimConfig base = {});

// Applies "key=value" strings in order.
void ApplyOverrides(SimConfig& cfg, const std::vector<std::string>& overrides);

// Every key with its current value, in schema order. ParseConfig of the
// joined "key = value" lines reproduces `cfg`.
std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const SimConfig& cfg);
std::string FormatConfig(const SimConfig& cfg);

}  // namespace treecast

#endif  // TREECAST_CONFIG_H
