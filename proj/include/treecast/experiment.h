#ifndef TREECAST_EXPERIMENT_H
#define TREECAST_EXPERIMENT_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "treecast/config.h"
#include "treecast/metrics.h"

namespace treecast {

// One configuration in a preset. `label` fills the CSV scheme column.
struct ConfigPoint {
  std::string label;
  SimConfig config;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  std::vector<ConfigPoint> points;
};

std::vector<std::string> PresetNames();
// Throws ConfigError for unknown names.
ExperimentPreset FindPreset(std::string_view name);

// Column order: preset,scheme,policy,lambda,receivers,pf,seed,mean_ct,
// p99_ct,max_ct,total_bytes,bw_overhead_vs_single_tree,max_group_entries,
// runtime_ms
struct ResultRow {
  std::string preset;
  std::string scheme;
  std::string policy;
  double lambda = 0.0;
  int receivers = 0;
  double pf = 0.0;
  std::string seed;  // a number, or "mean" for aggregate rows
  double mean_ct = 0.0;
  double p99_ct = 0.0;
  double max_ct = 0.0;
  double total_bytes = 0.0;
  double bw_overhead_vs_single_tree = 0.0;
  int max_group_entries = 0;
  double runtime_ms = 0.0;
};

std::string CsvHeader();
std::string CsvLine(const ResultRow& row);
std::string ToCsv(const std::vector<ResultRow>& rows);

struct RunResult {
  ConfigPoint point;
  uint64_t seed = 0;
  MetricsReport metrics;
  std::vector<ReceiverCompletion> completions;
  double runtime_ms = 0.0;
};

struct SweepOptions {
  std::vector<uint64_t> seeds;
  int workers = 1;
  std::vector<std::string> overrides;  // applied to every point
  bool timing = false;  // when false runtime_ms is written as 0
};

struct SweepResult {
  std::vector<RunResult> runs;  // ordered by (point, seed)
  std::vector<ResultRow> rows;  // per run, then one "mean" row per point
};

// Runs every (point, seed) pair, optionally on several threads. Output order
// depends only on the preset and seed list.
SweepResult RunSweep(const ExperimentPreset& preset, const SweepOptions& opts);

ResultRow MakeRow(const std::string& preset, const RunResult& run,
                  bool timing);

// JSON document with the config, summary and distributions of each run.
std::string SweepJson(const std::string& name, const SweepResult& result);

// Parses "A..B" or a single integer. Throws ConfigError when empty,
// reversed or malformed.
std::vector<uint64_t> ParseSeedRange(std::string_view text);

}  // namespace treecast

#endif  // TREECAST_EXPERIMENT_H
