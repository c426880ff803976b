// treecast: run single configurations or preset sweeps and write CSV/JSON.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "treecast/engine.h"
#include "treecast/experiment.h"

namespace fs = std::filesystem;
using namespace treecast;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

std::string DefaultOutDir() {
  const char* env = std::getenv("TREECAST_OUT");
  return env && *env ? env : "results";
}

void WriteOutputs(const std::string& dir, const std::string& name,
                  const SweepResult& result) {
  fs::create_directories(dir);
  std::ofstream csv(fs::path(dir) / (name + ".csv"), std::ios::binary);
  csv << ToCsv(result.rows);
  std::ofstream json(fs::path(dir) / (name + ".json"), std::ios::binary);
  json << SweepJson(name, result);
  if (!csv || !json) throw ConfigError("cannot write to '" + dir + "'");
}

const char* RequestName(WorkloadKind kind, RequestId id) {
  if (kind == WorkloadKind::kFig1) return id == 0 ? "blue" : "green";
  return "";
}

// Per-receiver completion table for the fixed scenarios.
void PrintReceiverTable(const SweepResult& result) {
  std::printf("%-16s %-8s %-8s %s\n", "scheme", "request", "receiver",
              "completion");
  for (const RunResult& run : result.runs) {
    for (const ReceiverCompletion& c : run.completions) {
      std::string req = std::to_string(c.request);
      const char* name = RequestName(run.point.config.workload, c.request);
      if (*name) req += std::string("/") + name;
      std::printf("%-16s %-8s %-8d %lld\n", run.point.label.c_str(),
                  req.c_str(), c.receiver, static_cast<long long>(c.time));
    }
  }
}

// Rows sharing (lambda, N, seed) form a category; mean_norm divides mean_ct
// by the category minimum.
void PrintRows(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<double, int, std::string>, double> best;
  for (const ResultRow& r : rows) {
    auto [it, fresh] = best.try_emplace({r.lambda, r.receivers, r.seed}, r.mean_ct);
    if (!fresh) it->second = std::min(it->second, r.mean_ct);
  }
  std::printf("%-26s %-6s %-7s %-5s %-6s %10s %9s %8s %8s %10s\n", "scheme",
              "policy", "lambda", "N", "seed", "mean_ct", "mean_norm", "p99_ct",
              "max_ct", "bw_ratio");
  for (const ResultRow& r : rows) {
    const double low = best.at({r.lambda, r.receivers, r.seed});
    std::printf("%-26s %-6s %-7g %-5d %-6s %10.3f %9.3f %8.0f %8.0f %10.4f\n",
                r.scheme.c_str(), r.policy.c_str(), r.lambda, r.receivers,
                r.seed.c_str(), r.mean_ct, low > 0 ? r.mean_ct / low : 1.0,
                r.p99_ct, r.max_ct, r.bw_overhead_vs_single_tree);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted simulator for multi-tree point-to-multipoint transfers"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir, seeds_text;
  uint64_t seed = 1;
  int workers = 1;
  bool timing = false;
  std::vector<std::string> overrides;

  CLI::App* run = app.add_subcommand("run", "run one config or preset");
  auto* cfg_opt = run->add_option("--config", config_path, "config file");
  auto* preset_opt = run->add_option("--preset", preset_name, "preset name");
  cfg_opt->excludes(preset_opt);
  run->add_option("--seed", seed, "random seed")->default_val(1);
  run->add_option("--out", out_dir, "output directory (default $TREECAST_OUT)");
  run->add_option("--override", overrides, "key=value, repeatable");
  run->add_flag("--timing", timing, "record wall time in runtime_ms");

  CLI::App* sweep = app.add_subcommand("sweep", "run a preset over a seed range");
  sweep->add_option("--preset", preset_name, "preset name")->required();
  sweep->add_option("--seeds", seeds_text, "seed range A..B")->required();
  sweep->add_option("--workers", workers, "parallel runs")->default_val(1);
  sweep->add_option("--out", out_dir, "output directory (default $TREECAST_OUT)");
  sweep->add_option("--override", overrides, "key=value, repeatable");
  sweep->add_flag("--timing", timing, "record wall time in runtime_ms");

  CLI::App* list = app.add_subcommand("presets", "list presets");

  CLI11_PARSE(app, argc, argv);
  if (out_dir.empty()) out_dir = DefaultOutDir();

  try {
    if (*list) {
      for (const std::string& name : PresetNames()) {
        std::printf("%-16s %s\n", name.c_str(),
                    FindPreset(name).description.c_str());
      }
      return 0;
    }

    ExperimentPreset preset;
    SweepOptions opts;
    opts.overrides = overrides;
    opts.timing = timing;
    if (*run) {
      if (!config_path.empty()) {
        if (!fs::exists(config_path)) {
          throw ConfigError("config file '" + config_path + "' not found");
        }
        SimConfig cfg = LoadConfigFile(config_path);
        preset.name = fs::path(config_path).stem().string();
        std::string label(SchemeName(cfg.scheme));
        if (cfg.strategy != PartitionStrategy::kProximity) {
          label += "+" + std::string(StrategyName(cfg.strategy));
        }
        preset.points.push_back({label, cfg});
      } else if (!preset_name.empty()) {
        preset = FindPreset(preset_name);
      } else {
        throw ConfigError("run needs --config or --preset");
      }
      opts.seeds = {seed};
    } else {
      preset = FindPreset(preset_name);
      opts.seeds = ParseSeedRange(seeds_text);
      opts.workers = workers;
    }

    SweepResult result = RunSweep(preset, opts);
    WriteOutputs(out_dir, preset.name, result);

    bool fixed = !result.runs.empty() &&
                 result.runs.front().point.config.workload != WorkloadKind::kPoisson;
    if (fixed) {
      PrintReceiverTable(result);
    } else {
      PrintRows(result.rows);
    }
    std::fprintf(stderr, "wrote %s/%s.csv\n", out_dir.c_str(),
                 preset.name.c_str());
    return 0;
  } catch (const InvariantViolation& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return kExitInvariant;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const TopologyError& e) {
    std::fprintf(stderr, "topology error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
