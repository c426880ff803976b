#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "treecast/engine.h"
#include "treecast/experiment.h"
#include "treecast/metrics.h"
#include "treecast/steiner.h"

namespace py = pybind11;
using namespace treecast;

namespace {

SimConfig MakeConfig(const py::dict& options) {
  SimConfig cfg;
  for (const auto& [key, value] : options) {
    std::string text = py::isinstance<py::bool_>(value)
                           ? (value.cast<bool>() ? "true" : "false")
                           : py::str(value).cast<std::string>();
    SetConfigValue(cfg, key.cast<std::string>(), text);
  }
  ValidateConfig(cfg);
  return cfg;
}

WeightMap Weights(const Network& net, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != net.num_edges()) {
    throw std::invalid_argument("need one weight per directed edge");
  }
  return WeightMap{w};
}

py::dict TreeDict(const ForwardingTree& t) {
  py::dict d;
  d["root"] = t.root;
  d["terminals"] = t.terminals;
  d["edges"] = t.edges;
  return d;
}

py::dict ReportDict(const MetricsReport& m) {
  py::dict d;
  d["requests"] = m.requests;
  d["mean_ct"] = m.completion.mean;
  d["p99_ct"] = m.completion.p99;
  d["max_ct"] = m.completion.max;
  d["receivers"] = m.completion.count;
  d["total_bytes"] = m.total_bytes;
  d["single_tree_bytes"] = m.single_tree_bytes;
  d["bw_overhead_vs_single_tree"] = m.bw_overhead_vs_single_tree;
  d["max_group_entries"] = m.group_table.network_max;
  d["mean_edge_utilization"] = m.mean_edge_utilization;
  d["end_slot"] = m.end_slot;
  return d;
}

}  // namespace

PYBIND11_MODULE(_treecast, m) {
  m.doc() = "Slotted simulator for multi-tree point-to-multipoint transfers";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TopologyError>(m, "TopologyError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation",
                                             PyExc_RuntimeError);

  py::class_<Network>(m, "Network")
      .def_static(
          "from_links",
          [](int n, const std::vector<std::tuple<int, int, double>>& links) {
            std::vector<Link> l;
            for (const auto& [u, v, c] : links) l.push_back({u, v, c});
            return Network::FromLinks(n, std::move(l));
          },
          py::arg("num_nodes"), py::arg("links"))
      .def_property_readonly("num_nodes", &Network::num_nodes)
      .def_property_readonly("num_edges", &Network::num_edges)
      .def_property_readonly("num_links", &Network::num_links)
      .def("edges",
           [](const Network& net) {
             std::vector<std::tuple<int, int, double>> out;
             for (const Edge& e : net.edges()) out.emplace_back(e.tail, e.head, e.capacity);
             return out;
           })
      .def("find_edge", &Network::find_edge)
      .def("serialize", &SerializeTopology)
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; });

  m.def("load_topology", &LoadTopology, py::arg("text"));
  m.def("builtin_topology", &BuiltinTopology, py::arg("name"));
  m.def("builtin_topology_names", &BuiltinTopologyNames);
  m.def("random_topology", &GenerateRandomTopology, py::arg("num_nodes"),
        py::arg("num_links"), py::arg("seed"));

  m.def(
      "steiner_tree",
      [](const Network& net, const std::vector<double>& w, NodeId root,
         const std::vector<NodeId>& terminals, bool exact) {
        WeightMap weights = Weights(net, w);
        return TreeDict(exact ? ExactSteinerTree(net, weights, root, terminals)
                              : MinWeightSteinerTree(net, weights, root, terminals));
      },
      py::arg("network"), py::arg("weights"), py::arg("root"), py::arg("terminals"),
      py::arg("exact") = false);

  m.def(
      "submit",
      [](const Network& net, NodeId source, std::vector<NodeId> receivers,
         double volume, std::vector<double> loads, int max_partitions,
         double partition_factor) {
        TransferRequest req{0, 0, source, std::move(receivers), volume};
        std::sort(req.receivers.begin(), req.receivers.end());
        LoadMap l(net);
        if (!loads.empty()) {
          if (static_cast<int>(loads.size()) != net.num_edges()) {
            throw std::invalid_argument("need one load per directed edge");
          }
          l.load = std::move(loads);
        }
        SubmitOptions opts;
        opts.max_partitions = max_partitions;
        opts.partition_factor = partition_factor;
        SubmitResult r = Submit(req, opts, net, l, HopDistances(net));
        py::list trees;
        for (const PartitionJob& job : r.jobs) trees.append(TreeDict(job.tree));
        py::dict d;
        d["trees"] = trees;
        d["single_tree_weight"] = r.single_tree_weight;
        d["accepted_weight"] = r.accepted_weight;
        d["loads"] = l.load;
        return d;
      },
      py::arg("network"), py::arg("source"), py::arg("receivers"),
      py::arg("volume"), py::arg("loads") = std::vector<double>{},
      py::arg("max_partitions") = 2,
      py::arg("partition_factor") = 1.1);

  m.def(
      "dispatch",
      [](const std::string& policy, const Network& net,
         const std::vector<std::pair<std::vector<EdgeId>, double>>& jobs,
         double slot) {
        std::vector<PartitionJob> js;
        for (size_t i = 0; i < jobs.size(); ++i) {
          PartitionJob j;
          j.request = static_cast<RequestId>(i);
          j.tree.edges = jobs[i].first;
          std::sort(j.tree.edges.begin(), j.tree.edges.end());
          j.volume = j.residual = jobs[i].second;
          js.push_back(std::move(j));
        }
        return Dispatch(ParsePolicy(policy), js, net, slot);
      },
      py::arg("policy"), py::arg("network"), py::arg("jobs"), py::arg("slot") = 1.0,
      "Rates for (tree edges, residual) jobs, ranked in list order.");

  m.def(
      "run",
      [](const py::dict& options) {
        SimConfig cfg = MakeConfig(options);
        EventLog log;
        {
          py::gil_scoped_release release;
          log = Run(cfg);
        }
        py::dict d = ReportDict(Summarize(log));
        py::list completions;
        for (const ReceiverCompletion& c : ReceiverCompletions(log)) {
          completions.append(py::make_tuple(c.request, c.receiver, c.time));
        }
        d["completions"] = completions;
        return d;
      },
      py::arg("options") = py::dict(),
      "Run one configuration given as config keys, e.g. {'scheme': 'dccast'}.");

  m.def("config_entries", [](const py::dict& options) {
    return ConfigEntries(MakeConfig(options));
  });

  m.def("preset_names", &PresetNames);

  m.def(
      "sweep",
      [](const std::string& preset, const std::string& seeds, int workers,
         const std::vector<std::string>& overrides) {
        SweepOptions opts;
        opts.seeds = ParseSeedRange(seeds);
        opts.workers = workers;
        opts.overrides = overrides;
        ExperimentPreset p = FindPreset(preset);
        py::gil_scoped_release release;
        return ToCsv(RunSweep(p, opts).rows);
      },
      py::arg("preset"), py::arg("seeds"), py::arg("workers") = 1,
      py::arg("overrides") = std::vector<std::string>{},
      "Run a preset over a seed range and return the CSV text.");
}
