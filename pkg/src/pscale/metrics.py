"""System-level metrics derived from per-layer reports."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .topology import GridTopology, symmetry_score

MAC_WEIGHTED = "mac_weighted"
LAYER_MEAN = "layer_mean"
MIN_CYCLES = "min_cycles"
MAX_UTILIZATION = "max_utilization"


@dataclass(frozen=True)
class ScalingPoint:
    pe_count: int
    total_cycles: int
    avg_utilization: float = 1.0


@dataclass(frozen=True)
class ArchProfile:
    name: str
    energy_fj_per_op: float
    peak_tops_w: float
    # published effective TOPS/W per workload; empty for simulated architectures
    eff_tops_w: dict[str, float]

    def __post_init__(self):
        if self.energy_fj_per_op <= 0 or self.peak_tops_w <= 0:
            raise ValueError(f"profile {self.name!r}: energy and peak TOPS/W must be positive")


def scaling_efficiency(base: ScalingPoint, scaled: ScalingPoint) -> float:
    """Speedup over hardware growth; 1.0 is linear scaling."""
    if scaled.total_cycles == 0 or base.pe_count == 0:
        raise ZeroDivisionError("scaling efficiency needs non-zero cycles and PE counts")
    if base.pe_count >= scaled.pe_count:
        raise ValueError("scaled point must have more PEs than the base point")
    return (base.total_cycles / scaled.total_cycles) / (scaled.pe_count / base.pe_count)


def workload_utilization(reports, weighting: str = MAC_WEIGHTED) -> float:
    reports = list(reports)
    if not reports:
        raise ValueError("workload_utilization needs at least one layer report")
    if weighting == MAC_WEIGHTED:
        useful = sum(r.useful_macs for r in reports)
        slots = sum(r.cycles * r.ar * r.ac for r in reports)
        return useful / slots
    if weighting == LAYER_MEAN:
        return sum(r.utilization for r in reports) / len(reports)
    raise ValueError(f"unknown weighting {weighting!r}")


def effective_metrics(profile: ArchProfile, avg_utilization: float) -> float:
    """Effective TOPS/W: the peak discounted by achieved utilization."""
    if not 0 < avg_utilization <= 1:
        raise ValueError("avg_utilization must be in (0, 1]")
    return profile.peak_tops_w * avg_utilization


def effective_throughput(avg_utilization: float, lanes: int) -> float:
    """Sustained MACs per clock, i.e. the multiple of the symbolic clock f."""
    return avg_utilization * lanes


def best_topology(points, criterion: str = MIN_CYCLES) -> GridTopology:
    """Pick from ``(topology, total_cycles, avg_utilization)`` triples.

    Ties go to the squarer grid, then to fewer PE rows.
    """
    points = list(points)
    if not points:
        raise ValueError("best_topology needs at least one candidate")
    if len({p[0].pe_count for p in points}) > 1:
        raise ValueError("all candidates must share one PE count")
    if criterion == MIN_CYCLES:
        key = lambda p: (p[1], -symmetry_score(p[0]), p[0].pe_rows)
    elif criterion == MAX_UTILIZATION:
        key = lambda p: (-p[2], -symmetry_score(p[0]), p[0].pe_rows)
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    return min(points, key=key)[0]


def load_arch_profiles() -> dict[str, ArchProfile]:
    text = resources.files("pscale.data").joinpath("arch_profiles.csv").read_text(encoding="utf-8")
    profiles = {}
    for row in csv.DictReader(text.splitlines()):
        eff = {
            k: float(v)
            for k, v in row.items()
            if k not in ("arch", "energy_fj_per_op", "peak_tops_w") and v
        }
        profiles[row["arch"]] = ArchProfile(
            row["arch"], float(row["energy_fj_per_op"]), float(row["peak_tops_w"]), eff
        )
    return profiles
