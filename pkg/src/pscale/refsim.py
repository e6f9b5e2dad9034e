"""Brute-force cycle-stepped reference simulator for the weight-stationary model.

This is the correctness oracle for :mod:`pscale.dataflow` and the demand side
of :mod:`pscale.memory`. It derives the layer's geometry by enumerating
window positions and then advances a discrete clock over every fold, counting
each read, MAC and write as it happens.

The stepping kernel comes from the compiled extension ``_refsim_core`` when it
was built, else from the pure-Python ``_refsim_py``. Set ``PSCALE_PURE=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import _refsim_py
from .errors import InstanceTooLargeError
from .workload import LayerShape

MAX_ARRAY_LANES = 4096
MAX_LAYER_MACS = 10**7

if os.environ.get("PSCALE_PURE"):
    _compiled = None
else:
    try:
        from . import _refsim_core as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_KERNELS = {"python": _refsim_py.simulate}
if _compiled is not None:
    _KERNELS["compiled"] = _compiled.simulate


@dataclass(frozen=True)
class RefSimResult:
    cycles: int
    useful_mac_events: int
    ifmap_reads: int
    filter_reads: int
    psum_reads: int
    ofmap_writes: int


def available_backends() -> list[str]:
    return sorted(_KERNELS)


def _window_positions(in_dim: int, pad: int, filt: int, stride: int) -> int:
    padded = in_dim + 2 * pad
    return sum(1 for y in range(padded) if y % stride == 0 and y + filt <= padded)


def simulate_ws_reference(
    layer: LayerShape,
    ar: int,
    ac: int,
    interposer_delay: int = 0,
    backend: str | None = None,
) -> RefSimResult:
    if ar < 1 or ac < 1:
        raise ValueError("array dimensions must be >= 1")
    if ar * ac > MAX_ARRAY_LANES:
        raise InstanceTooLargeError(f"array {ar}x{ac} exceeds {MAX_ARRAY_LANES} lanes")
    e = _window_positions(layer.ifmap_h, layer.padding, layer.filt_h, layer.stride)
    f = _window_positions(layer.ifmap_w, layer.padding, layer.filt_w, layer.stride)
    sr = layer.filt_h * layer.filt_w * layer.channels
    sc = layer.num_filters
    t = e * f
    if sr * sc * t > MAX_LAYER_MACS:
        raise InstanceTooLargeError(f"layer {layer.name!r} has more than {MAX_LAYER_MACS} MACs")
    kernel = _KERNELS[backend or BACKEND]
    return RefSimResult(*kernel(sr, sc, t, ar, ac, interposer_delay))
