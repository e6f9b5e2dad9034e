"""Report bundle serialization and re-derivation from persisted per-layer data.

Formatting is canonical so identical sweeps give byte-identical files:
integers bare, ratios with six decimals, energies in ``%.6e``.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .config import config_from_dict
from .dataflow import FoldPlan, LayerReport, _fold_sizes
from .errors import ReportError
from .memory import TRAFFIC_FIELDS, MemoryTraffic
from .metrics import effective_metrics, effective_throughput, load_arch_profiles
from .photonics import link_feasible, max_monolithic_mesh
from .sweep import SweepResult, TopologyResult, detect_symmetric_rule, detect_utilization_wall
from .topology import effective_dims, enumerate_topologies, symmetry_score

SCHEMA_VERSION = 1

BUNDLE_FILES = (
    "per_layer.csv",
    "summary.csv",
    "eta.csv",
    "comparison.csv",
    "summary.json",
    "plotdata_util.csv",
    "plotdata_traffic.csv",
)

DRAM_FIELDS = tuple(f"dram_{f}" for f in TRAFFIC_FIELDS)

PER_LAYER_COLUMNS = (
    "workload", "pe_count", "topology", "layer", "ar", "ac", "sr", "sc", "t",
    "row_folds", "col_folds", "cycles", "useful_macs", "utilization",
    *TRAFFIC_FIELDS, *DRAM_FIELDS,
)
SUMMARY_COLUMNS = (
    "workload", "pe_count", "topology", "pe_rows", "pe_cols", "symmetry_score",
    "total_cycles", "useful_macs", "util_mac_weighted", "util_layer_mean",
    "eff_throughput_f", *TRAFFIC_FIELDS, *DRAM_FIELDS, "laser_energy_j", "best",
)
ETA_COLUMNS = ("workload", "pe_count", "best_topology", "best_cycles", "best_util", "eta", "wall_flag")
COMPARISON_COLUMNS = ("arch", "workload", "energy_fj_per_op", "peak_tops_w", "avg_util", "eff_tops_w")
PLOT_UTIL_COLUMNS = ("workload", "pe_count", "topology", "util_mac_weighted", "util_layer_mean")
PLOT_TRAFFIC_COLUMNS = ("workload", "pe_count", "topology", *TRAFFIC_FIELDS, "total")

NOTES = (
    "configuration cycles are the sum of per-layer cycles; no inter-layer overhead is modeled",
    "traffic counts are words; SRAM columns are demand accesses, dram_* columns the projected off-chip traffic",
)


def fmt_ratio(x: float) -> str:
    return f"{x:.6f}"


def fmt_energy(x: float) -> str:
    return f"{x:.6e}"


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _traffic_cells(t: MemoryTraffic | None) -> list[str]:
    return [""] * 4 if t is None else [str(v) for v in t.as_tuple()]


def _traffic_dict(t: MemoryTraffic | None):
    return None if t is None else dict(zip(TRAFFIC_FIELDS, t.as_tuple()))


# ---------------------------------------------------------------- summary


def _comparison(result: SweepResult) -> list[dict]:
    profiles = load_arch_profiles()
    photonic = profiles["photonic"]
    rows = []
    for wl in result.workloads:
        for arch, prof in profiles.items():
            if arch == "photonic":
                # peak utilization over every swept configuration
                util = max(u.util_mac_weighted for (w, _, _), u in result.units.items() if w == wl)
                eff = effective_metrics(photonic, util)
            elif wl in prof.eff_tops_w:
                eff = prof.eff_tops_w[wl]
                util = eff / prof.peak_tops_w
            else:
                continue
            rows.append({
                "arch": arch,
                "workload": wl,
                "energy_fj_per_op": prof.energy_fj_per_op,
                "peak_tops_w": prof.peak_tops_w,
                "avg_util": util,
                "eff_tops_w": eff,
            })
    return rows


def _unit_summary(result: SweepResult, u: TopologyResult) -> dict:
    ar, ac = effective_dims(u.topology)
    return {
        "total_cycles": u.total_cycles,
        "useful_macs": u.useful_macs,
        "util_mac_weighted": u.util_mac_weighted,
        "util_layer_mean": u.util_layer_mean,
        "eff_throughput_f": effective_throughput(u.util_mac_weighted, ar * ac),
        "traffic": _traffic_dict(u.traffic),
        "dram": _traffic_dict(u.dram),
        "laser_energy_j": result.laser_energy(u),
    }


def build_summary(result: SweepResult) -> dict:
    """JSON-ready summary document (schema version 1)."""
    cfg = result.config
    try:
        max_mesh = max_monolithic_mesh(cfg.optical)
    except ValueError:
        max_mesh = 0
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "notes": list(NOTES),
        "feasibility": {
            "max_monolithic_mesh": max_mesh,
            "tile_dim": cfg.tile_dim,
            "tile_dim_feasible": link_feasible(cfg.tile_dim, cfg.optical),
        },
        "workloads": {},
        "comparison": _comparison(result),
    }
    multi = len(result.pe_counts) > 1
    for wl in result.workloads:
        wall = {p.pe_count: p for p in detect_utilization_wall(result, wl)} if multi else {}
        etas = dict(result.eta_table(wl))
        scales = {}
        for n in result.pe_counts:
            best = result.best(wl, n)
            rule = detect_symmetric_rule(result, wl, n)
            scales[str(n)] = {
                "best": best.topology.label,
                "best_cycles": best.total_cycles,
                "best_util_mac_weighted": best.util_mac_weighted,
                "best_util_layer_mean": best.util_layer_mean,
                "eta": etas[n],
                "wall_flag": wall[n].flagged if multi else False,
                "symmetric_rule": {
                    "util_ratio_best_over_worst_linear": rule.util_ratio_best_over_worst_linear,
                    "traffic_ratio_linear_over_best": rule.traffic_ratio_linear_over_best,
                },
                "topologies": {
                    u.topology.label: _unit_summary(result, u) for u in result.topologies(wl, n)
                },
            }
        first = result.topologies(wl, result.pe_counts[0])[0]
        doc["workloads"][wl] = {
            "layers": len(first.layers),
            "useful_macs": first.useful_macs,
            "pe_counts": scales,
        }
    return doc


def summary_json(summary: dict) -> str:
    return json.dumps(summary, indent=2) + "\n"


# ---------------------------------------------------------------- tables


def bundle_texts(result: SweepResult, summary: dict | None = None) -> dict[str, str]:
    summary = build_summary(result) if summary is None else summary
    per_layer, summ, plot_util, plot_traffic = [], [], [], []
    for (wl, n, label), u in result.units.items():
        best_label = summary["workloads"][wl]["pe_counts"][str(n)]["best"]
        for r in u.layers:
            p = r.plan
            per_layer.append([
                wl, n, label, r.layer, r.ar, r.ac, p.sr, p.sc, p.t, p.row_folds, p.col_folds,
                r.cycles, r.useful_macs, fmt_ratio(r.utilization),
                *_traffic_cells(r.traffic), *_traffic_cells(r.dram),
            ])
        ar, ac = effective_dims(u.topology)
        summ.append([
            wl, n, label, u.topology.pe_rows, u.topology.pe_cols, fmt_ratio(symmetry_score(u.topology)),
            u.total_cycles, u.useful_macs, fmt_ratio(u.util_mac_weighted), fmt_ratio(u.util_layer_mean),
            fmt_ratio(effective_throughput(u.util_mac_weighted, ar * ac)),
            *_traffic_cells(u.traffic), *_traffic_cells(u.dram),
            fmt_energy(result.laser_energy(u)), int(label == best_label),
        ])
        plot_util.append([wl, n, label, fmt_ratio(u.util_mac_weighted), fmt_ratio(u.util_layer_mean)])
        plot_traffic.append([wl, n, label, *u.traffic.as_tuple(), u.traffic.total])

    eta = []
    for wl, w in summary["workloads"].items():
        for n, s in w["pe_counts"].items():
            eta.append([wl, n, s["best"], s["best_cycles"], fmt_ratio(s["best_util_mac_weighted"]),
                        fmt_ratio(s["eta"]), int(s["wall_flag"])])
    comparison = [
        [c["arch"], c["workload"], c["energy_fj_per_op"], c["peak_tops_w"],
         fmt_ratio(c["avg_util"]), f"{c['eff_tops_w']:.2f}"]
        for c in summary["comparison"]
    ]
    return {
        "per_layer.csv": _csv_text(PER_LAYER_COLUMNS, per_layer),
        "summary.csv": _csv_text(SUMMARY_COLUMNS, summ),
        "eta.csv": _csv_text(ETA_COLUMNS, eta),
        "comparison.csv": _csv_text(COMPARISON_COLUMNS, comparison),
        "summary.json": summary_json(summary),
        "plotdata_util.csv": _csv_text(PLOT_UTIL_COLUMNS, plot_util),
        "plotdata_traffic.csv": _csv_text(PLOT_TRAFFIC_COLUMNS, plot_traffic),
    }


def write_bundle(result: SweepResult, out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, text in bundle_texts(result).items():
        path = out / name
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths[name] = path
    return paths


def format_best(summary: dict) -> list[str]:
    lines = []
    for wl, w in summary["workloads"].items():
        for n, s in w["pe_counts"].items():
            lines.append(
                f"{wl} N={n} best={s['best']} cycles={s['best_cycles']} "
                f"util={fmt_ratio(s['best_util_mac_weighted'])}"
            )
    return lines


def format_eta(summary: dict) -> list[str]:
    lines = []
    for wl, w in summary["workloads"].items():
        for n, s in w["pe_counts"].items():
            flag = " WALL" if s["wall_flag"] else ""
            lines.append(f"{wl} N={n} eta={fmt_ratio(s['eta'])}{flag}")
    return lines


# ---------------------------------------------------------------- re-derivation


def _int_cell(path, rowno, row, col):
    try:
        value = int(row[col])
    except (KeyError, TypeError, ValueError):
        raise ReportError(f"{path}: row {rowno}, column {col!r}: expected an integer, got {row.get(col)!r}") from None
    if value < 0:
        raise ReportError(f"{path}: row {rowno}, column {col!r}: negative count {value}")
    return value


def load_result(sweep_dir: str | Path) -> SweepResult:
    """Rebuild a :class:`SweepResult` from ``per_layer.csv`` and the config echo
    in ``summary.json``, without simulating anything.
    """
    d = Path(sweep_dir)
    summary_path = d / "summary.json"
    per_layer_path = d / "per_layer.csv"
    try:
        doc = json.loads(summary_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportError(f"{summary_path}: cannot read ({exc.strerror or exc})") from None
    except json.JSONDecodeError as exc:
        raise ReportError(f"{summary_path}: corrupt JSON ({exc})") from None
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ReportError(f"{summary_path}: unsupported schema_version {doc.get('schema_version')!r}")
    raw = dict(doc["config"])
    config = config_from_dict({
        "sweep": {k: v for k, v in raw.items() if k not in ("buffers", "optical", "laser")},
        "buffers": raw["buffers"],
        "optical": raw["optical"],
        "laser": raw["laser"],
    })

    try:
        text = per_layer_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"{per_layer_path}: cannot read ({exc.strerror or exc})") from None
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != PER_LAYER_COLUMNS:
        raise ReportError(f"{per_layer_path}: unexpected header {reader.fieldnames}")

    grouped: dict[tuple[str, int, str], list[LayerReport]] = {}
    workloads: list[str] = []
    for rowno, row in enumerate(reader, start=2):
        ints = {c: _int_cell(per_layer_path, rowno, row, c) for c in PER_LAYER_COLUMNS
                if c not in ("workload", "topology", "layer", "utilization") and not c.startswith("dram_")}
        wl, label = row["workload"], row["topology"]
        if wl not in workloads:
            workloads.append(wl)
        ar, ac, sr, sc, t = ints["ar"], ints["ac"], ints["sr"], ints["sc"], ints["t"]
        if ar * ac == 0 or ints["cycles"] == 0:
            raise ReportError(f"{per_layer_path}: row {rowno}: zero array size or cycle count")
        plan = FoldPlan(sr, sc, t, ar, ac, _fold_sizes(sr, ar), _fold_sizes(sc, ac), config.interposer_delay)
        if (plan.row_folds, plan.col_folds) != (ints["row_folds"], ints["col_folds"]):
            raise ReportError(f"{per_layer_path}: row {rowno}, column 'row_folds': inconsistent fold counts")
        util = ints["useful_macs"] / (ints["cycles"] * ar * ac)
        if fmt_ratio(util) != row["utilization"]:
            raise ReportError(
                f"{per_layer_path}: row {rowno}, column 'utilization': {row['utilization']!r} "
                f"does not match {fmt_ratio(util)}"
            )
        if all(row[c] == "" for c in DRAM_FIELDS):
            dram = None
        else:
            dram = MemoryTraffic(*(_int_cell(per_layer_path, rowno, row, c) for c in DRAM_FIELDS))
        report = LayerReport(
            layer=row["layer"], ar=ar, ac=ac, plan=plan, cycles=ints["cycles"],
            useful_macs=ints["useful_macs"], utilization=util,
            traffic=MemoryTraffic(*(ints[c] for c in TRAFFIC_FIELDS)), dram=dram,
        )
        grouped.setdefault((wl, ints["pe_count"], label), []).append(report)

    units = {}
    for wl in workloads:
        for n in config.pe_counts:
            for topo in enumerate_topologies(n, config.tile_dim):
                key = (wl, n, topo.label)
                if key not in grouped:
                    raise ReportError(f"{per_layer_path}: missing rows for {wl} N={n} grid {topo.label}")
                units[key] = TopologyResult(wl, topo, tuple(grouped.pop(key)))
    expected = {wl: info.get("layers") for wl, info in doc.get("workloads", {}).items()}
    base_n = config.pe_counts[0]
    for (wl, n, label), unit in units.items():
        # every grid of a workload must carry the same layer sequence
        names = [r.layer for r in unit.layers]
        ref = [r.layer for r in units[(wl, base_n, f"1x{base_n}")].layers]
        if names != ref or (expected.get(wl) is not None and len(names) != expected[wl]):
            raise ReportError(f"{per_layer_path}: incomplete or reordered layers for {wl} N={n} grid {label}")
    if grouped:
        extra = next(iter(grouped))
        raise ReportError(f"{per_layer_path}: unexpected rows for {extra[0]} N={extra[1]} grid {extra[2]}")
    return SweepResult(config, tuple(workloads), units)

