"""Dataset generation, auditing, batch evaluation, and report emission.

Instances and results are append-only JSON-Lines files: every line parses on
its own, and identical inputs always produce identical bytes. A manifest JSON
sits next to each dataset with the generation config, rejection tallies, and
a payload checksum, so a dataset can be regenerated and verified bit for bit.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from hexcover.graphbuild import (
    CoverageGraph,
    GenerationConfig,
    Instance,
    LatticeFrame,
    Rejection,
    build_instance,
    choose_family,
    graph_from_coords,
)
from hexcover.hexgeom import InvalidParameterError, OffsetCoord, Point
from hexcover.metrics import (
    PathMetrics,
    SummaryRow,
    aggregate_summary,
    compute_path_metrics,
)
from hexcover.planners import METHOD_ORDER, PLANNERS, WARNSDORFF_SLUGS, timed_plan

DATASET_SCHEMA = "hexcover-dataset/1"
RESULTS_SCHEMA = "hexcover-results/1"
ORACLE_DISPLAY = "Exact DFS (oracle)"


class DatasetError(ValueError):
    """Unreadable, unparseable, or self-inconsistent dataset/results file."""


class EmptyDatasetError(DatasetError):
    pass


def default_workers() -> int:
    env = os.environ.get("HEXCOVER_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Instance (de)serialization


def instance_to_record(inst: Instance) -> dict:
    g = inst.graph
    edges = []
    for i in range(g.n):
        for j in g.cell_neighbors(i):
            if i < j:
                edges.append([i, j])
    m = inst.aoi.morphology
    return {
        "schema": DATASET_SCHEMA,
        "id": inst.id,
        "seed": inst.seed,
        "family_hint": inst.aoi.family_hint,
        "morphology": {"label": m.label, "compactness": m.compactness, "aspect": m.aspect},
        "hex_radius": inst.hex_radius,
        "frame": {"origin": [g.frame.origin.x, g.frame.origin.y], "angle": g.frame.angle},
        "cells": [[c.coord.col, c.coord.row, c.center.x, c.center.y] for c in g.cells],
        "edges": edges,
        "base": [g.base_pos.x, g.base_pos.y],
        "terminal": [g.terminal_pos.x, g.terminal_pos.y],
        "base_links": list(g.base_links),
        "terminal_links": list(g.terminal_links),
        "audited_feasible": inst.audited_feasible,
    }


@dataclass(frozen=True)
class LoadedInstance:
    id: str
    seed: int
    family_hint: str
    morphology_label: str
    compactness: float
    aspect: float
    hex_radius: float
    audited_feasible: bool
    graph: CoverageGraph


def record_to_instance(rec: dict) -> LoadedInstance:
    coords = [OffsetCoord(int(c[0]), int(c[1])) for c in rec["cells"]]
    frame = LatticeFrame(
        Point(*rec["frame"]["origin"]), float(rec["frame"]["angle"])
    )
    graph = graph_from_coords(
        coords,
        float(rec["hex_radius"]),
        rec["base_links"],
        rec["terminal_links"],
        Point(*rec["base"]),
        frame,
        edges=[tuple(e) for e in rec["edges"]],
    )
    for cell, stored in zip(graph.cells, sorted(rec["cells"])):
        if cell.center.x != stored[2] or cell.center.y != stored[3]:
            raise DatasetError(f"instance {rec['id']}: stored centroid mismatch")
    return LoadedInstance(
        id=rec["id"],
        seed=int(rec["seed"]),
        family_hint=rec["family_hint"],
        morphology_label=rec["morphology"]["label"],
        compactness=float(rec["morphology"]["compactness"]),
        aspect=float(rec["morphology"]["aspect"]),
        hex_radius=float(rec["hex_radius"]),
        audited_feasible=bool(rec["audited_feasible"]),
        graph=graph,
    )


def _dump_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load_instances(path: str | Path) -> list[LoadedInstance]:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset not found: {path}")
    out = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                out.append(record_to_instance(rec))
            except (KeyError, ValueError, TypeError) as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from exc
    if not out:
        raise EmptyDatasetError(f"{path}: dataset contains no instances")
    return out


# ---------------------------------------------------------------------------
# Generation


@dataclass(frozen=True)
class DatasetManifest:
    version: str
    config: dict
    seed_start: int
    count: int
    seeds_scanned: int
    rejections: dict
    morphology_counts: dict
    sha256: str

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "seed_start": self.seed_start,
            "count": self.count,
            "seeds_scanned": self.seeds_scanned,
            "rejections": self.rejections,
            "morphology_counts": self.morphology_counts,
            "sha256": self.sha256,
        }


def _build_for_seed(args: tuple[int, dict]):
    seed, config_dict = args
    config = GenerationConfig.from_dict(config_dict)
    family = choose_family(seed, config)
    out = build_instance(family, seed, config)
    if isinstance(out, Rejection):
        return seed, "rej", out.reason
    return seed, "ok", instance_to_record(out)


def generate_dataset(
    count: int,
    seed: int,
    config: GenerationConfig,
    out_path: str | Path,
    workers: int | None = None,
) -> DatasetManifest:
    """Write `count` audited instances scanning seeds upward from `seed`.

    The admitted set is the first `count` audit-passing seeds in ascending
    order, so the output is identical for any worker count.
    """
    if count <= 0:
        raise InvalidParameterError("count must be positive")
    config.validate()
    workers = workers or default_workers()
    out_path = Path(out_path)

    records: list[dict] = []
    rejections: dict[str, int] = {}
    morphology: dict[str, int] = {}
    next_seed = seed
    cfg_dict = config.to_dict()
    block = max(16, workers * 8)

    with ProcessPoolExecutor(max_workers=workers) as pool:
        while len(records) < count:
            seeds = list(range(next_seed, next_seed + block))
            next_seed += block
            for _s, kind, payload in pool.map(
                _build_for_seed, [(s, cfg_dict) for s in seeds]
            ):
                if len(records) >= count:
                    break
                if kind == "rej":
                    rejections[payload] = rejections.get(payload, 0) + 1
                else:
                    records.append(payload)
                    label = payload["morphology"]["label"]
                    morphology[label] = morphology.get(label, 0) + 1

    payload_text = "".join(_dump_line(rec) + "\n" for rec in records)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(payload_text)
    digest = hashlib.sha256(payload_text.encode()).hexdigest()
    manifest = DatasetManifest(
        version=DATASET_SCHEMA,
        config=cfg_dict,
        seed_start=seed,
        count=count,
        seeds_scanned=next_seed - seed,
        rejections=dict(sorted(rejections.items())),
        morphology_counts=dict(sorted(morphology.items())),
        sha256=digest,
    )
    manifest_path = Path(str(out_path) + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")
    return manifest


# ---------------------------------------------------------------------------
# Audit


def audit_dataset(path: str | Path, budget: int | None = None) -> dict:
    """Re-run the exact oracle on every instance; report failures."""
    from hexcover.oracle import hamiltonian_audit

    instances = load_instances(path)
    infeasible = []
    inconclusive = []
    for inst in instances:
        res = hamiltonian_audit(inst.graph, budget=budget)
        if res.feasible is None:
            inconclusive.append(inst.id)
        elif not res.feasible:
            infeasible.append(inst.id)
    return {
        "total": len(instances),
        "feasible": len(instances) - len(infeasible) - len(inconclusive),
        "infeasible_ids": infeasible,
        "inconclusive_ids": inconclusive,
    }


# ---------------------------------------------------------------------------
# Batch evaluation


@dataclass(frozen=True)
class ResultRecord:
    instance_id: str
    method: str
    status: str
    walk: tuple[int, ...]
    revisits: int
    distance_norm: float
    turns_rad: float
    latency_ms: float

    def to_dict(self) -> dict:
        return {
            "schema": RESULTS_SCHEMA,
            "instance_id": self.instance_id,
            "method": self.method,
            "status": self.status,
            "walk": list(self.walk),
            "revisits": self.revisits,
            "distance_norm": self.distance_norm,
            "turns_rad": self.turns_rad,
            "latency_ms": self.latency_ms,
        }


def resolve_methods(methods: Sequence[str] | str) -> list[str]:
    if methods == "all" or methods == ["all"]:
        return list(METHOD_ORDER)
    out = []
    for name in methods:
        if name not in PLANNERS:
            raise InvalidParameterError(
                f"unknown method {name!r}; valid: {', '.join(METHOD_ORDER)}"
            )
        out.append(name)
    if not out:
        raise InvalidParameterError("no methods requested")
    return out


def _evaluate_instance(args: tuple[dict, list[str]]) -> list[dict]:
    rec, methods = args
    inst = record_to_instance(rec)
    out = []
    for method in methods:
        result, ms = timed_plan(inst.graph, method)
        pm = compute_path_metrics(inst.graph, result.walk, ms)
        if pm.status != result.status:
            raise AssertionError(
                f"{inst.id}/{method}: planner status {result.status} "
                f"disagrees with validation {pm.status}"
            )
        out.append(
            ResultRecord(
                inst.id, method, pm.status, result.walk,
                pm.revisits, pm.distance_norm, pm.turns_rad, pm.latency_ms,
            ).to_dict()
        )
    return out


def run_benchmark(
    dataset_path: str | Path,
    methods: Sequence[str] | str,
    out_path: str | Path | None = None,
    workers: int | None = None,
) -> list[ResultRecord]:
    """Evaluate every requested method on every instance.

    Output records are sorted by (instance_id, method); all fields except
    latency_ms are deterministic and independent of the worker count.
    """
    method_list = resolve_methods(methods)
    path = Path(dataset_path)
    if not path.exists():
        raise DatasetError(f"dataset not found: {path}")
    raw_records = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                try:
                    raw_records.append(json.loads(line))
                except ValueError as exc:
                    raise DatasetError(f"{path}:{lineno}: {exc}") from exc
    if not raw_records:
        raise EmptyDatasetError(f"{path}: dataset contains no instances")

    workers = workers or default_workers()
    tasks = [(rec, method_list) for rec in raw_records]
    results: list[dict] = []
    if workers == 1:
        for task in tasks:
            results.extend(_evaluate_instance(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_evaluate_instance, tasks, chunksize=4):
                results.extend(chunk)

    results.sort(key=lambda r: (r["instance_id"], r["method"]))
    records = [
        ResultRecord(
            r["instance_id"], r["method"], r["status"], tuple(r["walk"]),
            int(r["revisits"]), float(r["distance_norm"]), float(r["turns_rad"]),
            float(r["latency_ms"]),
        )
        for r in results
    ]
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text("".join(_dump_line(r) + "\n" for r in results))
    return records


def load_results(
    path: str | Path, instances: Sequence[LoadedInstance] | None = None
) -> list[ResultRecord]:
    """Parse a results file; with instances given, re-validate every walk."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"results not found: {path}")
    graphs = {i.id: i.graph for i in instances} if instances is not None else None
    out = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                r = json.loads(line)
                rec = ResultRecord(
                    r["instance_id"], r["method"], r["status"], tuple(r["walk"]),
                    int(r["revisits"]), float(r["distance_norm"]),
                    float(r["turns_rad"]), float(r["latency_ms"]),
                )
            except (KeyError, ValueError, TypeError) as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from exc
            if graphs is not None:
                g = graphs.get(rec.instance_id)
                if g is None:
                    raise DatasetError(
                        f"{path}:{lineno}: unknown instance {rec.instance_id}"
                    )
                pm = compute_path_metrics(g, rec.walk, rec.latency_ms)
                if pm.status != rec.status or pm.revisits != rec.revisits:
                    raise DatasetError(
                        f"{path}:{lineno}: stored status/revisits do not match "
                        f"the walk (tamper check failed)"
                    )
            out.append(rec)
    if not out:
        raise EmptyDatasetError(f"{path}: no results")
    return out


# ---------------------------------------------------------------------------
# Reporting


def records_to_metrics(
    records: Iterable[ResultRecord],
) -> list[tuple[str, str, PathMetrics]]:
    return [
        (
            r.instance_id,
            r.method,
            PathMetrics(r.status, r.revisits, r.distance_norm, r.turns_rad, r.latency_ms),
        )
        for r in records
    ]


def _fmt(x, digits=1):
    if x is None:
        return "-"
    return f"{x:.{digits}f}"


def feasibility_table(rows: list[SummaryRow], n_instances: int) -> list[dict]:
    """Table of HSR/CCR per method, oracle row first (audited datasets)."""
    out = [
        {
            "method": ORACLE_DISPLAY,
            "family": "Oracle",
            "hsr_pct": 100.0,
            "ccr_pct": 100.0,
            "n": n_instances,
        }
    ]
    for row in rows:
        spec = PLANNERS[row.method]
        out.append(
            {
                "method": spec.display,
                "family": spec.family,
                "hsr_pct": row.hsr_pct,
                "ccr_pct": row.ccr_pct,
                "n": row.n_instances,
            }
        )
    return out


def quality_table(rows: list[SummaryRow]) -> list[dict]:
    out = []
    for row in rows:
        spec = PLANNERS[row.method]
        out.append(
            {
                "method": spec.display,
                "revisits_mean": row.revisits_mean,
                "revisits_sd": row.revisits_sd,
                "distance_mean": row.distance_mean,
                "distance_sd": row.distance_sd,
                "turns_mean": row.turns_mean,
                "turns_sd": row.turns_sd,
                "latency_mean_ms": row.latency_mean_ms,
                "n_covered": row.n_covered,
            }
        )
    return out


def warnsdorff_table(rows: list[SummaryRow]) -> list[dict]:
    by_method = {r.method: r for r in rows}
    out = []
    for slug in WARNSDORFF_SLUGS:
        if slug not in by_method:
            continue
        r = by_method[slug]
        out.append(
            {
                "method": PLANNERS[slug].display,
                "hsr_pct": r.hsr_pct,
                "distance_mean": r.distance_mean,
                "distance_sd": r.distance_sd,
                "turns_mean": r.turns_mean,
                "turns_sd": r.turns_sd,
                "latency_mean_ms": r.latency_mean_ms,
            }
        )
    return out


def morphology_table(
    records: list[ResultRecord], instances: Sequence[LoadedInstance]
) -> list[dict]:
    """Warnsdorff HSR stratified by morphology, with per-stratum n."""
    label_of = {i.id: i.morphology_label for i in instances}
    strata = ("Compact", "Elongated", "Irregular")
    out = []
    for label in strata:
        ids = {iid for iid, lab in label_of.items() if lab == label}
        row: dict = {"morphology": label, "n": len(ids)}
        for slug in WARNSDORFF_SLUGS:
            subset = [
                r for r in records if r.method == slug and r.instance_id in ids
            ]
            if ids and subset:
                hsr = 100.0 * sum(r.status == "HamiltonianSuccess" for r in subset) / len(ids)
            else:
                hsr = None
            row[PLANNERS[slug].display] = hsr
        out.append(row)
    overall: dict = {"morphology": "Overall", "n": len(label_of)}
    for slug in WARNSDORFF_SLUGS:
        subset = [r for r in records if r.method == slug]
        overall[PLANNERS[slug].display] = (
            100.0 * sum(r.status == "HamiltonianSuccess" for r in subset) / len(label_of)
            if subset
            else None
        )
    out.append(overall)
    return out


def write_report(
    results_path: str | Path,
    dataset_path: str | Path,
    out_dir: str | Path,
    fmt: str = "markdown",
    strata: str | None = None,
    plots_dir: str | Path | None = None,
) -> list[Path]:
    """Emit feasibility, quality, and Warnsdorff tables (plus optional strata
    breakdown and SVG plots) from a results file."""
    if fmt not in ("markdown", "csv"):
        raise InvalidParameterError("format must be 'markdown' or 'csv'")
    if strata not in (None, "morphology"):
        raise InvalidParameterError("only morphology strata are supported")
    instances = load_instances(dataset_path)
    records = load_results(results_path, instances)
    methods = sorted({r.method for r in records}, key=METHOD_ORDER.index)
    rows = aggregate_summary(records_to_metrics(records), method_order=methods)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    feas = feasibility_table(rows, len(instances))
    qual = quality_table(rows)
    warns = warnsdorff_table(rows)
    ext = "md" if fmt == "markdown" else "csv"

    written.append(_write_table(out_dir / f"feasibility.{ext}", fmt, feas))
    written.append(_write_table(out_dir / f"quality.{ext}", fmt, qual))
    if warns:
        written.append(_write_table(out_dir / f"warnsdorff.{ext}", fmt, warns))
    if strata == "morphology":
        morph = morphology_table(records, instances)
        written.append(_write_table(out_dir / f"morphology.{ext}", fmt, morph))

    if plots_dir is not None:
        plots_dir = Path(plots_dir)
        plots_dir.mkdir(parents=True, exist_ok=True)
        written.append(_write_hsr_bar_svg(plots_dir / "hsr_bar.svg", rows))
        written.append(
            _write_revisits_scatter_svg(plots_dir / "revisits_vs_distance.svg", rows)
        )
    return written


def _write_table(path: Path, fmt: str, table: list[dict]) -> Path:
    if not table:
        raise InvalidParameterError("empty table")
    cols = list(table[0].keys())
    if fmt == "csv":
        import csv

        with path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            for row in table:
                writer.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    else:
        lines = ["| " + " | ".join(cols) + " |", "| " + " | ".join("---" for _ in cols) + " |"]
        for row in table:
            cells = []
            for k in cols:
                v = row[k]
                if isinstance(v, float):
                    cells.append(_fmt(v, 2))
                elif v is None:
                    cells.append("-")
                else:
                    cells.append(str(v))
            lines.append("| " + " | ".join(cells) + " |")
        path.write_text("\n".join(lines) + "\n")
        return path
    return path


# ---------------------------------------------------------------------------
# Minimal deterministic SVG plots


def _svg_header(w: int, h: int) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]


def _write_hsr_bar_svg(path: Path, rows: list[SummaryRow]) -> Path:
    w, h = 900, 420
    margin, base_y = 60, 360
    parts = _svg_header(w, h)
    if rows:
        bar_w = (w - 2 * margin) / len(rows) * 0.7
        step = (w - 2 * margin) / len(rows)
        for k, row in enumerate(rows):
            x = margin + k * step
            bar_h = (base_y - 40) * row.hsr_pct / 100.0
            parts.append(
                f'<rect x="{x:.1f}" y="{base_y - bar_h:.1f}" width="{bar_w:.1f}" '
                f'height="{bar_h:.1f}" fill="#33689e"/>'
            )
            parts.append(
                f'<text x="{x + bar_w / 2:.1f}" y="{base_y + 12}" font-size="8" '
                f'text-anchor="end" transform="rotate(-45 {x + bar_w / 2:.1f} '
                f'{base_y + 12})">{PLANNERS[row.method].display}</text>'
            )
            parts.append(
                f'<text x="{x + bar_w / 2:.1f}" y="{base_y - bar_h - 4:.1f}" '
                f'font-size="9" text-anchor="middle">{row.hsr_pct:.1f}</text>'
            )
    parts.append('<text x="20" y="20" font-size="12">Hamiltonian success rate (%)</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")
    return path


def _write_revisits_scatter_svg(path: Path, rows: list[SummaryRow]) -> Path:
    w, h = 640, 480
    margin = 70
    pts = [
        (row.revisits_mean, row.distance_mean, PLANNERS[row.method].display)
        for row in rows
        if row.revisits_mean is not None and row.distance_mean is not None
    ]
    parts = _svg_header(w, h)
    if pts:
        max_x = max(p[0] for p in pts) or 1.0
        min_y = min(p[1] for p in pts)
        max_y = max(p[1] for p in pts)
        span_y = (max_y - min_y) or 1.0
        for rx, dy, label in pts:
            px = margin + (w - 2 * margin) * rx / max_x
            py = h - margin - (h - 2 * margin) * (dy - min_y) / span_y
            parts.append(f'<circle cx="{px:.1f}" cy="{py:.1f}" r="4" fill="#b03a2e"/>')
            parts.append(
                f'<text x="{px + 6:.1f}" y="{py - 4:.1f}" font-size="8">{label}</text>'
            )
    parts.append(
        '<text x="20" y="20" font-size="12">Mean revisits vs normalized distance '
        "(coverage-complete subset)</text>"
    )
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")
    return path
