"""Slotted simulator for multi-tree point-to-multipoint transfers."""

from ._treecast import (
    ConfigError,
    InvariantViolation,
    Network,
    TopologyError,
    builtin_topology,
    builtin_topology_names,
    config_entries,
    dispatch,
    load_topology,
    preset_names,
    random_topology,
    run,
    steiner_tree,
    submit,
    sweep,
)

__all__ = [
    "ConfigError",
    "InvariantViolation",
    "Network",
    "TopologyError",
    "builtin_topology",
    "builtin_topology_names",
    "config_entries",
    "dispatch",
    "load_topology",
    "preset_names",
    "random_topology",
    "run",
    "steiner_tree",
    "submit",
    "sweep",
]
