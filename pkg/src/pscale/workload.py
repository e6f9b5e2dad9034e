"""Layer descriptions, the layer CSV format, and shipped benchmark presets.

A layer file is a CSV with the header::

    name,ifmap_h,ifmap_w,filt_h,filt_w,channels,num_filters,stride,padding

Lines starting with ``#`` are comments. Fully-connected layers are written as
1x1 convolutions over a 1x1 input (``C`` inputs, ``M`` outputs). Depthwise
convolutions are written with ``channels=1`` and ``num_filters`` equal to the
depthwise channel count, which preserves their MAC count.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import EmptyWorkloadError, WorkloadError, check_count

CSV_HEADER = (
    "name",
    "ifmap_h",
    "ifmap_w",
    "filt_h",
    "filt_w",
    "channels",
    "num_filters",
    "stride",
    "padding",
)

PRESETS = ("googlenet", "resnet18", "mobilenet", "alphagozero")
PRESET_PREFIX = "preset:"


@dataclass(frozen=True)
class LayerShape:
    name: str
    ifmap_h: int
    ifmap_w: int
    filt_h: int
    filt_w: int
    channels: int
    num_filters: int
    stride: int = 1
    padding: int = 0

    def __post_init__(self):
        for field in CSV_HEADER[1:-1]:
            if getattr(self, field) < 1:
                raise WorkloadError(f"layer {self.name!r}: {field} must be >= 1")
        if self.padding < 0:
            raise WorkloadError(f"layer {self.name!r}: padding must be >= 0")
        if self.ifmap_h + 2 * self.padding < self.filt_h:
            raise WorkloadError(f"layer {self.name!r}: filter height exceeds padded ifmap")
        if self.ifmap_w + 2 * self.padding < self.filt_w:
            raise WorkloadError(f"layer {self.name!r}: filter width exceeds padded ifmap")

    @property
    def window_size(self) -> int:
        """R*S*C, the number of array rows one filter occupies."""
        return self.filt_h * self.filt_w * self.channels


@dataclass(frozen=True)
class Workload:
    name: str
    layers: tuple[LayerShape, ...]

    def __post_init__(self):
        if not self.layers:
            raise EmptyWorkloadError(f"workload {self.name!r} has no layers")
        seen = set()
        for layer in self.layers:
            if layer.name in seen:
                raise WorkloadError(f"workload {self.name!r}: duplicate layer name {layer.name!r}")
            seen.add(layer.name)

    def __len__(self):
        return len(self.layers)

    def __iter__(self):
        return iter(self.layers)


def ofmap_dims(layer: LayerShape) -> tuple[int, int]:
    e = (layer.ifmap_h + 2 * layer.padding - layer.filt_h) // layer.stride + 1
    f = (layer.ifmap_w + 2 * layer.padding - layer.filt_w) // layer.stride + 1
    return e, f


def layer_macs(layer: LayerShape) -> int:
    e, f = ofmap_dims(layer)
    macs = e * f * layer.filt_h * layer.filt_w * layer.channels * layer.num_filters
    return check_count(macs, f"MAC count of layer {layer.name!r}")


def parse_layer_csv(text: str, name: str = "workload") -> Workload:
    """Parse layer CSV text into a :class:`Workload`.

    Row numbers in error messages are 1-based physical line numbers, so they
    point at the offending line in an editor.
    """
    header_seen = False
    layers = []
    for lineno, raw in enumerate(io.StringIO(text, newline=None), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if not header_seen:
            if tuple(fields) != CSV_HEADER:
                raise WorkloadError(f"expected header {','.join(CSV_HEADER)!r}", row=lineno)
            header_seen = True
            continue
        if len(fields) != len(CSV_HEADER):
            raise WorkloadError(
                f"expected {len(CSV_HEADER)} fields, got {len(fields)}", row=lineno
            )
        try:
            dims = [int(f) for f in fields[1:]]
        except ValueError:
            raise WorkloadError(f"non-integer field in {line!r}", row=lineno) from None
        if not fields[0]:
            raise WorkloadError("empty layer name", row=lineno)
        try:
            layers.append(LayerShape(fields[0], *dims))
        except WorkloadError as exc:
            raise WorkloadError(str(exc), row=lineno) from None
    if not header_seen:
        raise EmptyWorkloadError("layer file has no header row")
    if not layers:
        raise EmptyWorkloadError(f"workload {name!r} has no layers")
    try:
        return Workload(name, tuple(layers))
    except EmptyWorkloadError:
        raise
    except WorkloadError as exc:
        raise WorkloadError(str(exc)) from None


def serialize_layer_csv(workload: Workload) -> str:
    lines = [",".join(CSV_HEADER)]
    for layer in workload.layers:
        lines.append(",".join(str(getattr(layer, f)) for f in CSV_HEADER))
    return "\n".join(lines) + "\n"


def load_preset(name: str) -> Workload:
    key = name.lower()
    if key not in PRESETS:
        raise WorkloadError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("pscale.presets").joinpath(f"{key}.csv").read_text(encoding="utf-8")
    return parse_layer_csv(text, name=key)


def load_workload(ref: str | Path) -> Workload:
    """Load ``preset:<name>`` or a layer CSV path.

    Raises OSError (naming the path) when the file cannot be read.
    """
    ref = str(ref)
    if ref.startswith(PRESET_PREFIX):
        return load_preset(ref[len(PRESET_PREFIX):])
    path = Path(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read workload file {path}: {exc.strerror or exc}") from exc
    return parse_layer_csv(text, name=path.stem)
