"""PE grids of square photonic tensor-core chiplets."""

from __future__ import annotations

import re
from dataclasses import dataclass

DEFAULT_TILE_DIM = 4

_GRID_RE = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class GridTopology:
    pe_rows: int
    pe_cols: int
    tile_dim: int = DEFAULT_TILE_DIM

    def __post_init__(self):
        if self.pe_rows < 1 or self.pe_cols < 1 or self.tile_dim < 1:
            raise ValueError(f"invalid grid {self.pe_rows}x{self.pe_cols} (tile {self.tile_dim})")

    @property
    def pe_count(self) -> int:
        return self.pe_rows * self.pe_cols

    @property
    def label(self) -> str:
        return f"{self.pe_rows}x{self.pe_cols}"

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str, tile_dim: int = DEFAULT_TILE_DIM) -> "GridTopology":
        m = _GRID_RE.match(text)
        if not m:
            raise ValueError(f"grid must look like RxC, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), tile_dim)


def enumerate_topologies(pe_count: int, tile_dim: int = DEFAULT_TILE_DIM) -> list[GridTopology]:
    """Every ordered (rows, cols) factorization of ``pe_count``, rows ascending."""
    if pe_count < 1:
        raise ValueError("pe_count must be >= 1")
    small = []
    r = 1
    while r * r <= pe_count:
        if pe_count % r == 0:
            small.append(r)
        r += 1
    large = [pe_count // r for r in reversed(small) if r * r != pe_count]
    return [GridTopology(r, pe_count // r, tile_dim) for r in small + large]


def effective_dims(t: GridTopology) -> tuple[int, int]:
    """MAC-lane dimensions of the grid viewed as one monolithic array."""
    return t.pe_rows * t.tile_dim, t.pe_cols * t.tile_dim


def symmetry_score(t: GridTopology) -> float:
    return min(t.pe_rows, t.pe_cols) / max(t.pe_rows, t.pe_cols)
