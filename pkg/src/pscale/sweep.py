"""Exhaustive sweep over workloads x PE counts x grid aspect ratios."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .config import SweepConfig
from .dataflow import LayerReport, evaluate_layer
from .errors import ConfigError
from .memory import BufferConfig, MemoryTraffic, aggregate_traffic
from .metrics import (
    LAYER_MEAN,
    MAC_WEIGHTED,
    ScalingPoint,
    best_topology,
    scaling_efficiency,
    workload_utilization,
)
from .photonics import laser_energy_j
from .topology import GridTopology, effective_dims, enumerate_topologies
from .workload import Workload, load_workload


@dataclass(frozen=True)
class TopologyResult:
    workload: str
    topology: GridTopology
    layers: tuple[LayerReport, ...]

    @property
    def pe_count(self) -> int:
        return self.topology.pe_count

    @cached_property
    def total_cycles(self) -> int:
        return sum(r.cycles for r in self.layers)

    @cached_property
    def useful_macs(self) -> int:
        return sum(r.useful_macs for r in self.layers)

    @cached_property
    def traffic(self) -> MemoryTraffic:
        return aggregate_traffic(r.traffic for r in self.layers)

    @cached_property
    def dram(self) -> MemoryTraffic | None:
        if any(r.dram is None for r in self.layers):
            return None
        return aggregate_traffic(r.dram for r in self.layers)

    @cached_property
    def util_mac_weighted(self) -> float:
        return workload_utilization(self.layers, MAC_WEIGHTED)

    @cached_property
    def util_layer_mean(self) -> float:
        return workload_utilization(self.layers, LAYER_MEAN)


class WallPoint(NamedTuple):
    pe_count: int
    eta: float
    best_avg_util: float
    flagged: bool


class SymmetricRule(NamedTuple):
    best: GridTopology
    util_ratio_best_over_worst_linear: float
    traffic_ratio_linear_over_best: float


@dataclass
class SweepResult:
    config: SweepConfig
    workloads: tuple[str, ...]
    # keyed by (workload, pe_count, "RxC"), in canonical order
    units: dict[tuple[str, int, str], TopologyResult]

    @property
    def pe_counts(self) -> tuple[int, ...]:
        return self.config.pe_counts

    def topologies(self, workload: str, pe_count: int) -> list[TopologyResult]:
        if workload not in self.workloads:
            raise KeyError(f"workload {workload!r} not in sweep")
        if pe_count not in self.pe_counts:
            raise KeyError(f"PE count {pe_count} not in sweep")
        return [u for (w, n, _), u in self.units.items() if w == workload and n == pe_count]

    def best(self, workload: str, pe_count: int) -> TopologyResult:
        units = self.topologies(workload, pe_count)
        pick = best_topology((u.topology, u.total_cycles, u.util_mac_weighted) for u in units)
        return next(u for u in units if u.topology == pick)

    def eta_table(self, workload: str) -> list[tuple[int, float]]:
        """Scaling efficiency of each PE count's best grid against the smallest PE count."""
        base_n = self.pe_counts[0]
        base = ScalingPoint(base_n, self.best(workload, base_n).total_cycles)
        rows = [(base_n, 1.0)]
        for n in self.pe_counts[1:]:
            scaled = ScalingPoint(n, self.best(workload, n).total_cycles)
            rows.append((n, scaling_efficiency(base, scaled)))
        return rows

    def laser_energy(self, unit: TopologyResult) -> float:
        return laser_energy_j(unit.total_cycles, self.config.laser)


def evaluate_topology(
    workload: Workload,
    topology: GridTopology,
    interposer_delay: int = 0,
    buffers: BufferConfig | None = None,
) -> TopologyResult:
    ar, ac = effective_dims(topology)
    layers = tuple(evaluate_layer(l, ar, ac, interposer_delay, buffers) for l in workload.layers)
    return TopologyResult(workload.name, topology, layers)


def _evaluate_unit(args):
    return evaluate_topology(*args)


def run_sweep(
    config: SweepConfig,
    workloads: list[Workload] | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Evaluate every (workload, PE count, grid) unit.

    ``workloads`` overrides loading ``config.workloads`` (already-parsed
    workloads, e.g. from tests). Results come back in canonical order no
    matter how many worker processes run.
    """
    if workloads is None:
        workloads = [load_workload(ref) for ref in config.workloads]
    names = [w.name for w in workloads]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ConfigError([f"duplicate workload name {n!r}" for n in dupes])

    jobs = []
    for wl in workloads:
        for n in config.pe_counts:
            for topo in enumerate_topologies(n, config.tile_dim):
                jobs.append((wl, topo, config.interposer_delay, config.buffers))

    workers = config.workers if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_unit, jobs, chunksize=8))
    else:
        results = [_evaluate_unit(job) for job in jobs]

    units = {(r.workload, r.pe_count, r.topology.label): r for r in results}
    return SweepResult(config, tuple(names), units)


def detect_utilization_wall(
    result: SweepResult, workload: str, threshold: float | None = None
) -> list[WallPoint]:
    """Per PE count: eta from the smallest PE count and the best grid's utilization.

    Only the first PE count whose eta falls below ``threshold`` is flagged.
    """
    if len(result.pe_counts) < 2:
        raise ValueError("the utilization wall needs at least two PE counts")
    threshold = result.config.wall_threshold if threshold is None else threshold
    points = []
    flagged = False
    for n, eta in result.eta_table(workload):
        flag = not flagged and eta < threshold
        flagged = flagged or flag
        points.append(WallPoint(n, eta, result.best(workload, n).util_mac_weighted, flag))
    return points


def detect_symmetric_rule(result: SweepResult, workload: str, pe_count: int) -> SymmetricRule:
    """Best grid against the worse of the two linear grids (1xN, Nx1)."""
    units = {u.topology.label: u for u in result.topologies(workload, pe_count)}
    best = result.best(workload, pe_count)
    linear = [units[f"1x{pe_count}"], units[f"{pe_count}x1"]]
    worst_util = min(u.util_mac_weighted for u in linear)
    worst_traffic = max(u.traffic.total for u in linear)
    return SymmetricRule(
        best.topology,
        best.util_mac_weighted / worst_util,
        worst_traffic / best.traffic.total,
    )
