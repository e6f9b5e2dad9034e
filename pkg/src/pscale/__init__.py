"""Design-space exploration for chiplet-based photonic DNN accelerators."""

from .dataflow import FoldPlan, LayerReport, evaluate_layer, plan_folds, ws_cycles, ws_utilization
from .memory import BufferConfig, MemoryTraffic, aggregate_traffic, demand_traffic, dram_traffic
from .topology import GridTopology, effective_dims, enumerate_topologies, symmetry_score
from .workload import LayerShape, Workload, layer_macs, load_preset, load_workload, ofmap_dims, parse_layer_csv

__version__ = "0.1.0"

__all__ = [
    "BufferConfig",
    "FoldPlan",
    "GridTopology",
    "LayerReport",
    "LayerShape",
    "MemoryTraffic",
    "Workload",
    "aggregate_traffic",
    "demand_traffic",
    "dram_traffic",
    "effective_dims",
    "enumerate_topologies",
    "evaluate_layer",
    "layer_macs",
    "load_preset",
    "load_workload",
    "ofmap_dims",
    "parse_layer_csv",
    "plan_folds",
    "symmetry_score",
    "ws_cycles",
    "ws_utilization",
]
