"""Time the reference simulator's compiled and pure-Python kernels on the same instances.

    python benchmarks/bench_refsim.py [--repeat 3] [--max-dim 14]
"""

from __future__ import annotations

import argparse
import itertools
import time

from pscale.refsim import available_backends, simulate_ws_reference
from pscale.workload import LayerShape


def instances(max_dim: int):
    for h, r, c, m in itertools.product(range(3, max_dim + 1), (1, 3), (1, 3), (2, max_dim)):
        layer = LayerShape(f"h{h}r{r}c{c}m{m}", h, h, r, r, c, m, 1, r // 2)
        for ar, ac in ((2, 2), (4, 4), (8, 8), (1, 16), (16, 1)):
            yield layer, ar, ac


def bench(backend: str, cases, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for layer, ar, ac in cases:
            simulate_ws_reference(layer, ar, ac, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-dim", type=int, default=14)
    args = ap.parse_args(argv)

    cases = list(instances(args.max_dim))
    backends = available_backends()
    results = {}
    for b in backends:
        results[b] = bench(b, cases, args.repeat)
        print(f"{b:>9}: {results[b]:.3f}s for {len(cases)} instances (best of {args.repeat})")
    # sanity: both kernels must agree before a timing comparison means anything
    if len(backends) > 1:
        for layer, ar, ac in cases:
            outs = {simulate_ws_reference(layer, ar, ac, backend=b) for b in backends}
            assert len(outs) == 1, (layer, ar, ac)
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x")
    else:
        print("compiled kernel not built; only the pure-Python backend is available")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
