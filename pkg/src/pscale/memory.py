"""SRAM demand-access counting and a threshold DRAM projection."""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import check_count
from .workload import LayerShape, ofmap_dims

TRAFFIC_FIELDS = ("ifmap_reads", "filter_reads", "psum_reads", "ofmap_writes")


@dataclass(frozen=True)
class MemoryTraffic:
    ifmap_reads: int = 0
    filter_reads: int = 0
    psum_reads: int = 0
    ofmap_writes: int = 0

    def __post_init__(self):
        for f in TRAFFIC_FIELDS:
            if getattr(self, f) < 0:
                raise ValueError(f"{f} must be non-negative")

    def __add__(self, other: "MemoryTraffic") -> "MemoryTraffic":
        return MemoryTraffic(*(check_count(a + b, "traffic") for a, b in zip(self.as_tuple(), other.as_tuple())))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.ifmap_reads, self.filter_reads, self.psum_reads, self.ofmap_writes)

    @property
    def total(self) -> int:
        return sum(self.as_tuple())


@dataclass(frozen=True)
class BufferConfig:
    ifmap_sram_bytes: int = 512 * 1024
    filter_sram_bytes: int = 512 * 1024
    ofmap_sram_bytes: int = 256 * 1024
    word_bytes: int = 1

    def __post_init__(self):
        if self.word_bytes < 1:
            raise ValueError("word_bytes must be >= 1")
        for f in fields(self):
            if getattr(self, f.name) < self.word_bytes:
                raise ValueError(f"{f.name} must be >= word_bytes ({self.word_bytes})")


def demand_traffic(plan) -> MemoryTraffic:
    """SRAM accesses of a fold plan.

    Weights load once per fold occupancy; one ifmap read feeds every active
    column through passive fan-out; every row fold writes its column results
    and every row fold after the first reads the running partial sums back.
    """
    rf, cf, t = plan.row_folds, plan.col_folds, plan.t
    return MemoryTraffic(
        ifmap_reads=check_count(cf * t * plan.sr, "ifmap reads"),
        filter_reads=check_count(plan.sr * plan.sc, "filter reads"),
        psum_reads=check_count((rf - 1) * t * plan.sc, "psum reads"),
        ofmap_writes=check_count(rf * t * plan.sc, "ofmap writes"),
    )


def _touched_extent(in_dim: int, out_dim: int, filt: int, stride: int) -> int:
    # padded ifmap positions covered by at least one window along one axis
    if stride <= filt:
        return (out_dim - 1) * stride + filt
    return out_dim * filt


def working_sets(layer: LayerShape) -> MemoryTraffic:
    """Distinct elements per operand class, packed into a MemoryTraffic.

    The ifmap set counts padded positions touched by some window, which equals
    (H+2P)*(W+2P)*C whenever the windows tile the padded input exactly.
    """
    e, f = ofmap_dims(layer)
    ifmap = (
        _touched_extent(layer.ifmap_h + 2 * layer.padding, e, layer.filt_h, layer.stride)
        * _touched_extent(layer.ifmap_w + 2 * layer.padding, f, layer.filt_w, layer.stride)
        * layer.channels
    )
    return MemoryTraffic(
        ifmap_reads=ifmap,
        filter_reads=layer.filt_h * layer.filt_w * layer.channels * layer.num_filters,
        psum_reads=0,
        ofmap_writes=e * f * layer.num_filters,
    )


def dram_traffic(plan, layer: LayerShape, demand: MemoryTraffic, buf: BufferConfig) -> MemoryTraffic:
    """Off-chip traffic under a fit-or-stream policy per operand class.

    A class whose working set fits its SRAM crosses the chip boundary once per
    element; otherwise every SRAM demand access goes to DRAM.
    """
    ws = working_sets(layer)
    wb = buf.word_bytes
    ifmap = ws.ifmap_reads if ws.ifmap_reads * wb <= buf.ifmap_sram_bytes else demand.ifmap_reads
    filt = ws.filter_reads if ws.filter_reads * wb <= buf.filter_sram_bytes else demand.filter_reads
    if ws.ofmap_writes * wb <= buf.ofmap_sram_bytes:
        psum, ofmap = 0, ws.ofmap_writes
    else:
        psum, ofmap = demand.psum_reads, demand.ofmap_writes
    return MemoryTraffic(ifmap, filt, psum, ofmap)


def aggregate_traffic(reports) -> MemoryTraffic:
    total = MemoryTraffic()
    for r in reports:
        total = total + r
    return total
