"""Run configuration: a TOML file with ``[sweep]``, ``[buffers]``, ``[optical]``
and ``[laser]`` sections. Every key is optional.

Example::

    [sweep]
    workloads = ["preset:googlenet", "layers/my_net.csv"]
    pe_counts = [64, 128, 256, 512, 1024]
    tile_dim = 4
    interposer_delay = 0
    output_dir = "out"

    [buffers]
    filter_sram_bytes = 65536
"""

from __future__ import annotations

import dataclasses
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .memory import BufferConfig
from .photonics import LaserParams, OpticalParams
from .workload import PRESET_PREFIX, PRESETS

CONFIG_ENV = "PSCALE_CONFIG"

DEFAULT_PE_COUNTS = (64, 128, 256, 512, 1024)
DEFAULT_WORKLOADS = tuple(PRESET_PREFIX + p for p in PRESETS)


@dataclass(frozen=True)
class SweepConfig:
    workloads: tuple[str, ...] = DEFAULT_WORKLOADS
    pe_counts: tuple[int, ...] = DEFAULT_PE_COUNTS
    tile_dim: int = 4
    interposer_delay: int = 0
    buffers: BufferConfig = field(default_factory=BufferConfig)
    optical: OpticalParams = field(default_factory=OpticalParams)
    laser: LaserParams = field(default_factory=LaserParams)
    output_dir: str = "pscale_out"
    wall_threshold: float = 0.7
    workers: int = 1

    def __post_init__(self):
        problems = []
        if not self.workloads:
            problems.append("workloads must be non-empty")
        if not self.pe_counts:
            problems.append("pe_counts must be non-empty")
        elif any(n < 1 for n in self.pe_counts):
            problems.append("pe_counts must be positive")
        elif any(b <= a for a, b in zip(self.pe_counts, self.pe_counts[1:])):
            problems.append("pe_counts must be strictly increasing")
        if self.tile_dim < 1:
            problems.append("tile_dim must be >= 1")
        if self.interposer_delay < 0:
            problems.append("interposer_delay must be >= 0")
        if not 0 < self.wall_threshold <= 1:
            problems.append("wall_threshold must be in (0, 1]")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if problems:
            raise ConfigError(problems)

    def replace(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        """Plain-data echo of the configuration, stable across runs."""
        d = dataclasses.asdict(self)
        d["workloads"] = list(self.workloads)
        d["pe_counts"] = list(self.pe_counts)
        return d


_SECTIONS = {
    "buffers": BufferConfig,
    "optical": OpticalParams,
    "laser": LaserParams,
}
_SWEEP_KEYS = {
    "workloads",
    "pe_counts",
    "tile_dim",
    "interposer_delay",
    "output_dir",
    "wall_threshold",
    "workers",
}


def _section(cls, data: dict, name: str, problems: list[str]):
    known = {f.name for f in dataclasses.fields(cls)}
    for key in sorted(set(data) - known):
        problems.append(f"[{name}] unknown key {key!r}")
    try:
        return cls(**{k: v for k, v in data.items() if k in known})
    except (TypeError, ValueError) as exc:
        problems.append(f"[{name}] {exc}")
        return None


def config_from_dict(raw: dict) -> SweepConfig:
    problems = []
    for key in sorted(set(raw) - {"sweep", *_SECTIONS}):
        problems.append(f"unknown section [{key}]")
    sweep = dict(raw.get("sweep", {}))
    for key in sorted(set(sweep) - _SWEEP_KEYS):
        problems.append(f"[sweep] unknown key {key!r}")
    kwargs = {k: v for k, v in sweep.items() if k in _SWEEP_KEYS}
    for key in ("workloads", "pe_counts"):
        if key in kwargs:
            if not isinstance(kwargs[key], list):
                problems.append(f"[sweep] {key} must be a list")
            else:
                kwargs[key] = tuple(kwargs[key])
    if "output_dir" in kwargs:
        kwargs["output_dir"] = str(kwargs["output_dir"])
    for name, cls in _SECTIONS.items():
        kwargs[name] = _section(cls, raw.get(name, {}), name, problems)
    if problems:
        raise ConfigError(problems)
    try:
        return SweepConfig(**kwargs)
    except ConfigError:
        raise
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None = None) -> SweepConfig:
    """Read a run-config file; ``None`` falls back to $PSCALE_CONFIG, then defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
        if not path:
            return SweepConfig()
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(raw)
