#include "treecast/config.h"

#include <gtest/gtest.h>

#include <cmath>

namespace treecast {
namespace {

TEST(Config, DefaultsFollowEvaluationSetup) {
  SimConfig c;
  EXPECT_EQ(c.arrival_rate, 1.0);
  EXPECT_EQ(c.partition_factor, 1.1);
  EXPECT_EQ(c.slot, 1.0);
  EXPECT_EQ(c.size_mean, 20.0);
  EXPECT_EQ(c.size_min, 2.0);
  EXPECT_EQ(c.size_max, 2000.0);
  EXPECT_EQ(c.receivers, 10);
  EXPECT_EQ(c.max_partitions, 2);
  EXPECT_NO_THROW(ValidateConfig(c));
}

TEST(Config, SchemesMapToPartitionLimitsAndPolicies) {
  SimConfig c;
  c.scheme = Scheme::kDcCast;
  EXPECT_EQ(c.effective_policy(), Policy::kFcfs);
  EXPECT_EQ(c.submit_options().max_partitions, 1);
  c.scheme = Scheme::kQuickCastNp;
  EXPECT_EQ(c.effective_policy(), Policy::kMaxMinFair);
  EXPECT_EQ(c.submit_options().max_partitions, 1);
  c.scheme = Scheme::kQuickCastTwo;
  EXPECT_EQ(c.submit_options().max_partitions, 2);
  EXPECT_TRUE(std::isinf(c.submit_options().partition_factor));
  c.scheme = Scheme::kQuickCast;
  c.partition_factor = 1.05;
  EXPECT_EQ(c.submit_options().partition_factor, 1.05);
  c.policy = Policy::kSrpt;
  EXPECT_EQ(c.effective_policy(), Policy::kSrpt);
}

TEST(Config, ParsesKeyValueText) {
  SimConfig c = ParseConfig(R"(# comment
topology = gscale
scheme = dccast   # trailing comment
policy = srpt
srpt_ranking = partition
partition_strategy = source
pf = inf
lambda = 0.5
size_dist = pareto
receivers = 4
slots = 300
seed = 9
)");
  EXPECT_EQ(c.topology, "gscale");
  EXPECT_EQ(c.scheme, Scheme::kDcCast);
  EXPECT_EQ(c.policy, Policy::kSrpt);
  EXPECT_EQ(c.srpt_ranking, SrptRanking::kPerPartition);
  EXPECT_EQ(c.strategy, PartitionStrategy::kSourceDistance);
  EXPECT_TRUE(std::isinf(c.partition_factor));
  EXPECT_EQ(c.arrival_rate, 0.5);
  EXPECT_EQ(c.size_dist, SizeDistribution::kPareto);
  EXPECT_EQ(c.receivers, 4);
  EXPECT_EQ(c.slots, 300);
  EXPECT_EQ(c.seed, 9u);
}

TEST(Config, FormatRoundTrips) {
  SimConfig c;
  c.topology = "fig4";
  c.topology_seed = 77;
  c.policy = Policy::kFcfs;
  c.lognormal_sigma = 1.25;
  c.size_dist = SizeDistribution::kLogNormal;
  c.warmup = 10;
  c.record_edge_history = false;
  SimConfig back = ParseConfig(FormatConfig(c));
  EXPECT_EQ(ConfigEntries(back), ConfigEntries(c));
  EXPECT_EQ(FormatConfig(back), FormatConfig(c));
}

TEST(Config, OverridesApplyInOrder) {
  SimConfig c;
  ApplyOverrides(c, {"receivers=3", "receivers = 5", "scheme=quickcast_two"});
  EXPECT_EQ(c.receivers, 5);
  EXPECT_EQ(c.scheme, Scheme::kQuickCastTwo);
  EXPECT_THROW(ApplyOverrides(c, {"receivers"}), ConfigError);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(ParseConfig("nonsense = 1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("receivers = many\n"), ConfigError);
  EXPECT_THROW(ParseConfig("scheme = multicast\n"), ConfigError);
  EXPECT_THROW(ParseConfig("just a line\n"), ConfigError);
  EXPECT_THROW(LoadConfigFile("/nonexistent/cfg.txt"), ConfigError);
  for (const char* bad : {"lambda = 0", "receivers = 0", "pf = 0.9", "slot = 0",
                          "size_min = 30", "warmup = 5000"}) {
    SimConfig c = ParseConfig(bad);
    EXPECT_THROW(ValidateConfig(c), ConfigError) << bad;
  }
}

}  // namespace
}  // namespace treecast
