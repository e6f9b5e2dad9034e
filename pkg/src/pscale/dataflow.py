"""Analytical weight-stationary mapping onto the effective MAC array.

The window (R*S*C) maps onto array rows and the filters (M) onto columns.
Each fold preloads one weight row per cycle, then streams the E*F input
vectors with one cycle of skew per row, so a fold with ``r`` occupied rows
and ``c`` occupied columns takes ``2r + c + t - 2`` cycles. Folds run back to
back; each fold boundary costs a constant interposer delay.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import check_count
from .memory import BufferConfig, MemoryTraffic, demand_traffic, dram_traffic
from .workload import LayerShape, layer_macs, ofmap_dims


def _fold_sizes(total: int, dim: int) -> tuple[int, ...]:
    full, rem = divmod(total, dim)
    return (dim,) * full + ((rem,) if rem else ())


@dataclass(frozen=True)
class FoldPlan:
    sr: int
    sc: int
    t: int
    ar: int
    ac: int
    row_sizes: tuple[int, ...]
    col_sizes: tuple[int, ...]
    interposer_delay: int = 0

    @property
    def row_folds(self) -> int:
        return len(self.row_sizes)

    @property
    def col_folds(self) -> int:
        return len(self.col_sizes)

    @property
    def fold_count(self) -> int:
        return len(self.row_sizes) * len(self.col_sizes)


@dataclass(frozen=True)
class LayerReport:
    layer: str
    ar: int
    ac: int
    plan: FoldPlan
    cycles: int
    useful_macs: int
    utilization: float
    traffic: MemoryTraffic
    dram: MemoryTraffic | None = None


def plan_folds(layer: LayerShape, ar: int, ac: int, interposer_delay: int = 0) -> FoldPlan:
    if ar < 1 or ac < 1:
        raise ValueError("array dimensions must be >= 1")
    if interposer_delay < 0:
        raise ValueError("interposer_delay must be >= 0")
    e, f = ofmap_dims(layer)
    sr = layer.window_size
    sc = layer.num_filters
    return FoldPlan(
        sr=sr,
        sc=sc,
        t=e * f,
        ar=ar,
        ac=ac,
        row_sizes=_fold_sizes(sr, ar),
        col_sizes=_fold_sizes(sc, ac),
        interposer_delay=interposer_delay,
    )


def ws_cycles(plan: FoldPlan) -> int:
    rf, cf = plan.row_folds, plan.col_folds
    # sum over folds of (2 r_i + c_j + t - 2), using sum(r_i) = sr, sum(c_j) = sc
    cycles = 2 * plan.sr * cf + plan.sc * rf + rf * cf * (plan.t - 2)
    cycles += (rf * cf - 1) * plan.interposer_delay
    return check_count(cycles, "cycle count")


def useful_work(plan: FoldPlan) -> int:
    return plan.sr * plan.sc * plan.t


def ws_utilization(plan: FoldPlan, cycles: int, ar: int | None = None, ac: int | None = None) -> float:
    ar = plan.ar if ar is None else ar
    ac = plan.ac if ac is None else ac
    return useful_work(plan) / (cycles * ar * ac)


def evaluate_layer(
    layer: LayerShape,
    ar: int,
    ac: int,
    interposer_delay: int = 0,
    buffers: BufferConfig | None = None,
) -> LayerReport:
    """Cycles, utilization and traffic of one layer on an ``ar x ac`` array."""
    plan = plan_folds(layer, ar, ac, interposer_delay)
    cycles = ws_cycles(plan)
    demand = demand_traffic(plan)
    dram = dram_traffic(plan, layer, demand, buffers) if buffers is not None else None
    return LayerReport(
        layer=layer.name,
        ar=ar,
        ac=ac,
        plan=plan,
        cycles=cycles,
        useful_macs=layer_macs(layer),
        utilization=ws_utilization(plan, cycles, ar, ac),
        traffic=demand,
        dram=dram,
    )
