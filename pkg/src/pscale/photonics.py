"""Optical link budget of a monolithic MZI mesh and the laser energy model.

All losses are in dB and add along a light path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleError

MESH_SCAN_LIMIT = 1024
# absorbs log10 rounding at exact budget boundaries such as 10*log10(1000) == 30
_DB_SLACK = 1e-9


@dataclass(frozen=True)
class OpticalParams:
    mzi_loss_db: float = 0.4
    crossing_loss_db: float = 0.05
    crossings_per_link: int = 0
    link_budget_db: float = 15.0
    margin_db: float = 0.0

    def __post_init__(self):
        if min(self.mzi_loss_db, self.crossing_loss_db, self.crossings_per_link, self.margin_db) < 0:
            raise ValueError("optical losses must be non-negative")
        if self.link_budget_db <= 0:
            raise ValueError("link_budget_db must be positive")


@dataclass(frozen=True)
class LaserParams:
    laser_power_w: float = 1.0
    cycle_time_s: float = 1e-9

    def __post_init__(self):
        if self.laser_power_w <= 0 or self.cycle_time_s <= 0:
            raise ValueError("laser power and cycle time must be positive")


def fanout_loss_db(n: int) -> float:
    """Passive 1-to-n split loss."""
    if n < 1:
        raise ValueError("fanout must be >= 1")
    return 10.0 * math.log10(n)


def mesh_loss_db(n: int, p: OpticalParams = OpticalParams()) -> float:
    """Insertion loss through an n x n Clements mesh, taken as n MZI stages deep."""
    if n < 1:
        raise ValueError("mesh size must be >= 1")
    return n * p.mzi_loss_db + p.crossings_per_link * p.crossing_loss_db


def link_loss_db(n: int, p: OpticalParams = OpticalParams()) -> float:
    return mesh_loss_db(n, p) + fanout_loss_db(n) + p.margin_db


def link_feasible(n: int, p: OpticalParams = OpticalParams()) -> bool:
    return link_loss_db(n, p) <= p.link_budget_db + _DB_SLACK


def max_monolithic_mesh(p: OpticalParams = OpticalParams(), limit: int = MESH_SCAN_LIMIT) -> int:
    if not link_feasible(1, p):
        raise InfeasibleError(
            f"even a 1x1 mesh needs {link_loss_db(1, p):.3f} dB > {p.link_budget_db} dB budget"
        )
    best = 1
    for n in range(2, limit + 1):
        if not link_feasible(n, p):
            break
        best = n
    return best


def feasibility_table(max_n: int, p: OpticalParams = OpticalParams()) -> list[tuple[int, float, float, float, bool]]:
    """Rows of (n, mesh loss, fanout loss, total, feasible) for n = 1..max_n."""
    rows = []
    for n in range(1, max_n + 1):
        mesh = mesh_loss_db(n, p)
        fan = fanout_loss_db(n)
        rows.append((n, mesh, fan, mesh + fan + p.margin_db, link_feasible(n, p)))
    return rows


def laser_energy_j(total_cycles: int, lp: LaserParams = LaserParams()) -> float:
    """The laser burns for every cycle, productive or not."""
    if total_cycles < 0:
        raise ValueError("total_cycles must be >= 0")
    return lp.laser_power_w * lp.cycle_time_s * total_cycles
