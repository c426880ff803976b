#include "treecast/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace treecast {

namespace {

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double ToDouble(std::string_view key, std::string_view v) {
  std::string text(v);
  if (text == "inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    size_t used = 0;
    double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number for '" + std::string(key) + "': '" + text +
                    "'");
}

int64_t ToInt(std::string_view key, std::string_view v) {
  int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("bad integer for '" + std::string(key) + "': '" +
                      std::string(v) + "'");
  }
  return out;
}

uint64_t ToUnsigned(std::string_view key, std::string_view v) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("bad unsigned integer for '" + std::string(key) +
                      "': '" + std::string(v) + "'");
  }
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + std::string(key) + "': '" +
                    std::string(v) + "'");
}

std::string FormatDouble(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << d;
  return out.str();
}

std::string_view DistName(SizeDistribution d) {
  switch (d) {
    case SizeDistribution::kExponential:
      return "exponential";
    case SizeDistribution::kPareto:
      return "pareto";
    case SizeDistribution::kLogNormal:
      return "lognormal";
  }
  return "?";
}

std::string_view WorkloadName(WorkloadKind w) {
  switch (w) {
    case WorkloadKind::kPoisson:
      return "poisson";
    case WorkloadKind::kFig1:
      return "fig1";
    case WorkloadKind::kFig4:
      return "fig4";
    case WorkloadKind::kTrace:
      return "trace";
  }
  return "?";
}

}  // namespace

Scheme ParseScheme(std::string_view name) {
  if (name == "quickcast") return Scheme::kQuickCast;
  if (name == "quickcast_np") return Scheme::kQuickCastNp;
  if (name == "quickcast_two") return Scheme::kQuickCastTwo;
  if (name == "dccast") return Scheme::kDcCast;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view SchemeName(Scheme s) {
  switch (s) {
    case Scheme::kQuickCast:
      return "quickcast";
    case Scheme::kQuickCastNp:
      return "quickcast_np";
    case Scheme::kQuickCastTwo:
      return "quickcast_two";
    case Scheme::kDcCast:
      return "dccast";
  }
  return "?";
}

std::string_view StrategyName(PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::kProximity:
      return "proximity";
    case PartitionStrategy::kSourceDistance:
      return "source";
    case PartitionStrategy::kRandomSplit:
      return "random";
  }
  return "?";
}

Policy SimConfig::effective_policy() const {
  if (policy) return *policy;
  return scheme == Scheme::kDcCast ? Policy::kFcfs : Policy::kMaxMinFair;
}

SubmitOptions SimConfig::submit_options() const {
  SubmitOptions opts;
  opts.strategy = strategy;
  opts.seed = seed;
  switch (scheme) {
    case Scheme::kDcCast:
    case Scheme::kQuickCastNp:
      opts.max_partitions = 1;
      opts.partition_factor = 1.0;
      break;
    case Scheme::kQuickCastTwo:
      opts.max_partitions = max_partitions;
      opts.partition_factor = std::numeric_limits<double>::infinity();
      break;
    case Scheme::kQuickCast:
      opts.max_partitions = max_partitions;
      opts.partition_factor = partition_factor;
      break;
  }
  return opts;
}

void ValidateConfig(const SimConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(cfg.arrival_rate > 0.0, "lambda must be > 0");
  require(cfg.receivers >= 1, "receivers must be >= 1");
  require(cfg.partition_factor >= 1.0, "pf must be >= 1");
  require(cfg.max_partitions >= 1, "max_partitions must be >= 1");
  require(cfg.slot > 0.0, "slot must be > 0");
  require(cfg.slots >= 1, "slots must be >= 1");
  require(cfg.warmup >= 0 && cfg.warmup < cfg.slots,
          "warmup must be in [0, slots)");
  require(cfg.size_min >= 0.0, "size_min must be >= 0");
  require(cfg.size_mean > 0.0, "size_mean must be > 0");
  require(cfg.size_min <= cfg.size_mean && cfg.size_mean <= cfg.size_max,
          "need size_min <= size_mean <= size_max");
  require(cfg.size_dist != SizeDistribution::kPareto ||
              cfg.size_mean > cfg.size_min,
          "pareto needs size_mean > size_min");
  require(cfg.size_dist != SizeDistribution::kPareto || cfg.size_min > 0.0,
          "pareto needs size_min > 0");
  require(cfg.lognormal_sigma > 0.0, "lognormal_sigma must be > 0");
  require(cfg.random_nodes >= 3, "random_nodes must be >= 3");
  require(cfg.random_links >= cfg.random_nodes,
          "random_links must be >= random_nodes");
  require(cfg.workload != WorkloadKind::kTrace || !cfg.trace_path.empty(),
          "workload = trace needs trace = PATH");
}

void SetConfigValue(SimConfig& cfg, std::string_view key,
                    std::string_view value) {
  const std::string v = Trim(value);
  try {
    if (key == "topology") {
      cfg.topology = v;
    } else if (key == "random_nodes") {
      cfg.random_nodes = static_cast<int>(ToInt(key, v));
    } else if (key == "random_links") {
      cfg.random_links = static_cast<int>(ToInt(key, v));
    } else if (key == "topology_seed") {
      if (v.empty() || v == "auto") {
        cfg.topology_seed.reset();
      } else {
        cfg.topology_seed = ToUnsigned(key, v);
      }
    } else if (key == "scheme") {
      cfg.scheme = ParseScheme(v);
    } else if (key == "policy") {
      if (v == "auto") {
        cfg.policy.reset();
      } else {
        cfg.policy = ParsePolicy(v);
      }
    } else if (key == "srpt_ranking") {
      if (v == "request") {
        cfg.srpt_ranking = SrptRanking::kPerRequest;
      } else if (v == "partition") {
        cfg.srpt_ranking = SrptRanking::kPerPartition;
      } else {
        throw ConfigError("srpt_ranking must be request or partition");
      }
    } else if (key == "partition_strategy") {
      if (v == "proximity") {
        cfg.strategy = PartitionStrategy::kProximity;
      } else if (v == "source") {
        cfg.strategy = PartitionStrategy::kSourceDistance;
      } else if (v == "random") {
        cfg.strategy = PartitionStrategy::kRandomSplit;
      } else {
        throw ConfigError("partition_strategy must be proximity, source or random");
      }
    } else if (key == "max_partitions") {
      cfg.max_partitions = static_cast<int>(ToInt(key, v));
    } else if (key == "pf") {
      cfg.partition_factor = ToDouble(key, v);
    } else if (key == "workload") {
      if (v == "poisson") {
        cfg.workload = WorkloadKind::kPoisson;
      } else if (v == "fig1") {
        cfg.workload = WorkloadKind::kFig1;
      } else if (v == "fig4") {
        cfg.workload = WorkloadKind::kFig4;
      } else if (v == "trace") {
        cfg.workload = WorkloadKind::kTrace;
      } else {
        throw ConfigError("workload must be poisson, fig1, fig4 or trace");
      }
    } else if (key == "trace") {
      cfg.trace_path = v;
    } else if (key == "lambda") {
      cfg.arrival_rate = ToDouble(key, v);
    } else if (key == "size_dist") {
      if (v == "exponential") {
        cfg.size_dist = SizeDistribution::kExponential;
      } else if (v == "pareto") {
        cfg.size_dist = SizeDistribution::kPareto;
      } else if (v == "lognormal") {
        cfg.size_dist = SizeDistribution::kLogNormal;
      } else {
        throw ConfigError("size_dist must be exponential, pareto or lognormal");
      }
    } else if (key == "size_mean") {
      cfg.size_mean = ToDouble(key, v);
    } else if (key == "size_min") {
      cfg.size_min = ToDouble(key, v);
    } else if (key == "size_max") {
      cfg.size_max = ToDouble(key, v);
    } else if (key == "lognormal_sigma") {
      cfg.lognormal_sigma = ToDouble(key, v);
    } else if (key == "receivers") {
      cfg.receivers = static_cast<int>(ToInt(key, v));
    } else if (key == "slot") {
      cfg.slot = ToDouble(key, v);
    } else if (key == "slots") {
      cfg.slots = ToInt(key, v);
    } else if (key == "warmup") {
      cfg.warmup = ToInt(key, v);
    } else if (key == "seed") {
      cfg.seed = ToUnsigned(key, v);
    } else if (key == "check_invariants") {
      cfg.check_invariants = ToBool(key, v);
    } else if (key == "record_edge_history") {
      cfg.record_edge_history = ToBool(key, v);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SimConfig ParseConfig(std::string_view text, SimConfig base) {
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (Trim(line).empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    std::string key = Trim(line.substr(0, eq));
    try {
      SetConfigValue(base, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

SimConfig LoadConfigFile(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), std::move(base));
}

void ApplyOverrides(SimConfig& cfg, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    size_t eq = o.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + o + "' is not key=value");
    }
    SetConfigValue(cfg, Trim(std::string_view(o).substr(0, eq)),
                   std::string_view(o).substr(eq + 1));
  }
}

std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const SimConfig& cfg) {
  return {
      {"topology", cfg.topology},
      {"random_nodes", std::to_string(cfg.random_nodes)},
      {"random_links", std::to_string(cfg.random_links)},
      {"topology_seed",
       cfg.topology_seed ? std::to_string(*cfg.topology_seed) : "auto"},
      {"scheme", std::string(SchemeName(cfg.scheme))},
      {"policy", cfg.policy ? std::string(PolicyName(*cfg.policy)) : "auto"},
      {"srpt_ranking", cfg.srpt_ranking == SrptRanking::kPerRequest
                           ? "request"
                           : "partition"},
      {"partition_strategy", std::string(StrategyName(cfg.strategy))},
      {"max_partitions", std::to_string(cfg.max_partitions)},
      {"pf", FormatDouble(cfg.partition_factor)},
      {"workload", std::string(WorkloadName(cfg.workload))},
      {"trace", cfg.trace_path},
      {"lambda", FormatDouble(cfg.arrival_rate)},
      {"size_dist", std::string(DistName(cfg.size_dist))},
      {"size_mean", FormatDouble(cfg.size_mean)},
      {"size_min", FormatDouble(cfg.size_min)},
      {"size_max", FormatDouble(cfg.size_max)},
      {"lognormal_sigma", FormatDouble(cfg.lognormal_sigma)},
      {"receivers", std::to_string(cfg.receivers)},
      {"slot", FormatDouble(cfg.slot)},
      {"slots", std::to_string(cfg.slots)},
      {"warmup", std::to_string(cfg.warmup)},
      {"seed", std::to_string(cfg.seed)},
      {"check_invariants", cfg.check_invariants ? "true" : "false"},
      {"record_edge_history", cfg.record_edge_history ? "true" : "false"},
  };
}

std::string FormatConfig(const SimConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : ConfigEntries(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace treecast
