#include "treecast/experiment.h"

#include <gtest/gtest.h>

#include <json.hpp>
#include <set>
#include <sstream>

namespace treecast {
namespace {

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

TEST(Csv, HeaderMatchesSchema) {
  EXPECT_EQ(CsvHeader(),
            "preset,scheme,policy,lambda,receivers,pf,seed,mean_ct,p99_ct,"
            "max_ct,total_bytes,bw_overhead_vs_single_tree,max_group_entries,"
            "runtime_ms");
}

TEST(SeedRange, Parses) {
  EXPECT_EQ(ParseSeedRange("1..3"), (std::vector<uint64_t>{1, 2, 3}));
  EXPECT_EQ(ParseSeedRange("7"), (std::vector<uint64_t>{7}));
  EXPECT_EQ(ParseSeedRange("4..4"), (std::vector<uint64_t>{4}));
  for (const char* bad : {"", "3..1", "a..b", "1..", "..2", "1.5", "-1"}) {
    EXPECT_THROW(ParseSeedRange(bad), ConfigError) << bad;
  }
}

TEST(Presets, AllKnownPresetsBuild) {
  std::set<std::string> names;
  for (const std::string& name : PresetNames()) {
    ExperimentPreset p = FindPreset(name);
    EXPECT_EQ(p.name, name);
    EXPECT_FALSE(p.points.empty()) << name;
    for (const ConfigPoint& pt : p.points) EXPECT_NO_THROW(ValidateConfig(pt.config));
    names.insert(name);
  }
  for (const char* required : {"fig1", "fig2", "policies", "partitioning",
                               "bw-partitioning", "qc-vs-dccast", "copies"}) {
    EXPECT_TRUE(names.count(required)) << required;
  }
  EXPECT_THROW(FindPreset("fig99"), ConfigError);
}

TEST(Presets, AxesMatchExperiments) {
  ExperimentPreset policies = FindPreset("policies");
  std::set<std::pair<int, std::string>> axes;
  for (const ConfigPoint& pt : policies.points) {
    axes.insert({pt.config.receivers, std::string(PolicyName(pt.config.effective_policy()))});
  }
  EXPECT_EQ(axes.size(), 9u);
  ExperimentPreset copies = FindPreset("copies");
  std::set<int> n;
  for (const ConfigPoint& pt : copies.points) n.insert(pt.config.receivers);
  EXPECT_EQ(n, (std::set<int>{2, 3, 4, 5, 6, 7, 8, 9, 10}));
}

TEST(Sweep, EveryPresetEmitsSchemaValidCsv) {
  const size_t columns = Split(CsvHeader()).size();
  for (const std::string& name : PresetNames()) {
    SweepOptions opts;
    opts.seeds = {1, 2};
    opts.overrides = {"slots=25", "record_edge_history=false"};
    if (name == "qc-vs-dccast" || name == "copies") opts.overrides.push_back("lambda=0.5");
    SweepResult r = RunSweep(FindPreset(name), opts);
    const size_t points = FindPreset(name).points.size();
    ASSERT_EQ(r.rows.size(), points * 3) << name;
    std::string csv = ToCsv(r.rows);
    std::stringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, CsvHeader());
    size_t count = 0;
    while (std::getline(in, line)) {
      auto cells = Split(line);
      ASSERT_EQ(cells.size(), columns) << line;
      EXPECT_EQ(cells[0], name);
      EXPECT_EQ(cells[6], count % 3 == 2 ? "mean" : std::to_string(count % 3 + 1));
      ++count;
    }
    auto doc = nlohmann::json::parse(SweepJson(name, r));
    EXPECT_EQ(doc["runs"].size(), points * 2);
  }
}

TEST(Sweep, AggregateRowIsMeanOverSeeds) {
  SweepOptions opts;
  opts.seeds = {3, 4, 5};
  opts.overrides = {"slots=60", "receivers=4"};
  SweepResult r = RunSweep(FindPreset("partitioning"), opts);
  for (size_t p = 0; p < r.rows.size(); p += 4) {
    double mean = 0.0, bytes = 0.0;
    int groups = 0;
    for (int s = 0; s < 3; ++s) {
      mean += r.rows[p + s].mean_ct / 3;
      bytes += r.rows[p + s].total_bytes / 3;
      groups = std::max(groups, r.rows[p + s].max_group_entries);
    }
    EXPECT_EQ(r.rows[p + 3].seed, "mean");
    EXPECT_NEAR(r.rows[p + 3].mean_ct, mean, 1e-9);
    EXPECT_NEAR(r.rows[p + 3].total_bytes, bytes, 1e-9);
    EXPECT_EQ(r.rows[p + 3].max_group_entries, groups);
  }
}

TEST(Sweep, WorkerCountDoesNotChangeOutput) {
  SweepOptions opts;
  opts.seeds = {1, 2, 3};
  opts.overrides = {"slots=40"};
  std::string one = ToCsv(RunSweep(FindPreset("bw-partitioning"), opts).rows);
  opts.workers = 3;
  SweepResult three = RunSweep(FindPreset("bw-partitioning"), opts);
  EXPECT_EQ(ToCsv(three.rows), one);
  opts.workers = 8;
  EXPECT_EQ(ToCsv(RunSweep(FindPreset("bw-partitioning"), opts).rows), one);
}

TEST(Sweep, TimingOffWritesZeroRuntime) {
  SweepOptions opts;
  opts.seeds = {1};
  SweepResult r = RunSweep(FindPreset("fig1"), opts);
  for (const ResultRow& row : r.rows) EXPECT_EQ(row.runtime_ms, 0.0);
  opts.timing = true;
  r = RunSweep(FindPreset("fig1"), opts);
  EXPECT_GE(r.runs[0].runtime_ms, 0.0);
}

TEST(Sweep, ErrorsSurface) {
  SweepOptions opts;
  EXPECT_THROW(RunSweep(FindPreset("fig1"), opts), ConfigError);
  opts.seeds = {1};
  opts.overrides = {"receivers=0"};
  EXPECT_THROW(RunSweep(FindPreset("fig2"), opts), ConfigError);
}

}  // namespace
}  // namespace treecast
