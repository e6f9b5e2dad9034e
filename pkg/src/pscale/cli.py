"""Command-line front end: ``pscale simulate | sweep | feasibility | report``.

Exit codes: 0 success, 1 I/O or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .config import load_config
from .dataflow import evaluate_layer
from .errors import ConfigError, PscaleError
from .memory import TRAFFIC_FIELDS
from .photonics import feasibility_table, max_monolithic_mesh
from .refsim import simulate_ws_reference
from .report import (
    build_summary,
    bundle_texts,
    fmt_ratio,
    format_best,
    format_eta,
    load_result,
    summary_json,
    write_bundle,
)
from .sweep import run_sweep
from .topology import GridTopology, effective_dims
from .workload import load_workload

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


def _err(msg: str) -> None:
    print(f"pscale: error: {msg}", file=sys.stderr)


def cmd_simulate(args, parser) -> int:
    try:
        grid = GridTopology.parse(args.grid)
    except ValueError as exc:
        parser.error(str(exc))
    if grid.pe_count != args.pe:
        parser.error(f"grid {grid.label} has {grid.pe_count} PEs, not {args.pe}")
    config = load_config(args.config)
    grid = GridTopology(grid.pe_rows, grid.pe_cols, config.tile_dim)
    workload = load_workload(args.workload)
    ar, ac = effective_dims(grid)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["layer", "sr", "sc", "t", "folds", "cycles", "utilization", *TRAFFIC_FIELDS])
    folds = cycles_total = useful_total = 0
    traffic_total = [0, 0, 0, 0]
    for layer in workload.layers:
        r = evaluate_layer(layer, ar, ac, config.interposer_delay)
        if args.oracle:
            ref = simulate_ws_reference(layer, ar, ac, config.interposer_delay)
            cycles, useful = ref.cycles, ref.useful_mac_events
            traffic = (ref.ifmap_reads, ref.filter_reads, ref.psum_reads, ref.ofmap_writes)
        else:
            cycles, useful, traffic = r.cycles, r.useful_macs, r.traffic.as_tuple()
        p = r.plan
        folds += p.fold_count
        cycles_total += cycles
        useful_total += useful
        traffic_total = [a + b for a, b in zip(traffic_total, traffic)]
        out.writerow([layer.name, p.sr, p.sc, p.t, p.fold_count, cycles,
                      fmt_ratio(useful / (cycles * ar * ac)), *traffic])
    out.writerow(["TOTAL", "", "", "", folds, cycles_total,
                  fmt_ratio(useful_total / (cycles_total * ar * ac)), *traffic_total])
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    config = load_config(args.config)
    changes = {}
    if args.workload:
        changes["workloads"] = tuple(args.workload)
    if args.pe:
        changes["pe_counts"] = tuple(args.pe)
    if args.output:
        changes["output_dir"] = args.output
    if args.workers:
        changes["workers"] = args.workers
    if changes:
        config = config.replace(**changes)
    result = run_sweep(config)
    summary = build_summary(result)
    try:
        write_bundle(result, config.output_dir)
    except OSError as exc:
        raise OSError(f"cannot write reports to {config.output_dir}: {exc.strerror or exc}") from exc
    for line in format_best(summary) + format_eta(summary):
        print(line)
    return EXIT_OK


def cmd_feasibility(args, parser) -> int:
    if args.max_n < 1:
        parser.error("--max-n must be >= 1")
    optical = load_config(args.config).optical
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "mesh_loss_db", "fanout_loss_db", "total_db", "feasible"])
    for n, mesh, fan, total, ok in feasibility_table(args.max_n, optical):
        out.writerow([n, f"{mesh:.3f}", f"{fan:.3f}", f"{total:.3f}", "yes" if ok else "no"])
    print(f"max_monolithic_mesh={max_monolithic_mesh(optical)} (budget {optical.link_budget_db} dB)")
    return EXIT_OK


def cmd_report(args, parser) -> int:
    result = load_result(args.input)
    summary = build_summary(result)
    if args.best or args.eta:
        lines = (format_best(summary) if args.best else []) + (format_eta(summary) if args.eta else [])
        print("\n".join(lines))
    elif args.format == "json":
        sys.stdout.write(summary_json(summary))
    else:
        sys.stdout.write(bundle_texts(result, summary)["summary.csv"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pscale", description="Chiplet photonic accelerator design-space explorer"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evaluate one workload on one grid")
    p.add_argument("--workload", required=True, help="layer CSV path or preset:<name>")
    p.add_argument("--pe", type=int, required=True, help="PE count")
    p.add_argument("--grid", required=True, help="PE grid as RxC")
    p.add_argument("--config", help="run-config TOML (default: $PSCALE_CONFIG)")
    p.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="full sweep; writes the report bundle")
    p.add_argument("--config", help="run-config TOML (default: $PSCALE_CONFIG)")
    p.add_argument("--workload", action="append", help="override workloads (repeatable)")
    p.add_argument("--pe", type=int, action="append", help="override PE counts (repeatable)")
    p.add_argument("--output", help="override output directory")
    p.add_argument("--workers", type=int, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("feasibility", help="optical link-budget table")
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--config", help="run-config TOML (default: $PSCALE_CONFIG)")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("report", help="re-derive summaries from a sweep directory")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--best", action="store_true")
    p.add_argument("--eta", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ConfigError as exc:
        _err(f"invalid configuration: {exc}")
        return EXIT_DATA
    except (OSError, PscaleError) as exc:
        _err(str(exc))
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
