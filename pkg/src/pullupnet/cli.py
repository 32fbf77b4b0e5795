"""Command line front end: single-mesh runs and corpus sweeps.

``unfold`` takes one OBJ or Netlib file through the whole pipeline and
writes the cut SVG, fabrication plan, refold report, preview figure, and
optional animation frames into a seed-named directory.  ``corpus`` sweeps a
directory of solids, one CSV row each, with timing kept in a separate file
so the main CSV is byte-stable for a fixed seed.

Exit codes: 0 success, 2 rejected input (parse or validation), 3 split
budget exhausted, 1 anything else.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .fabricate import (
    DEFAULT_HOLE_RADIUS_MM,
    DEFAULT_INSET_MM,
    DEFAULT_SCALE_MM,
    build_plan,
    export_plan,
    export_svg,
)
from .foldsim import export_frames, fold_state_at, verify_refold
from .mesh import (
    MeshError,
    ParseError,
    PipelineError,
    normalize_orientation,
    parse_netlib,
    parse_obj,
    validate_manifold,
)
from .pullup import compute_join_sets, plan_string_path, prune_join_sets
from .unfold import (
    HEURISTICS,
    BudgetExceededError,
    UnfoldConfig,
    unfold_with_fallback,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_REJECTED = 2
EXIT_BUDGET = 3

CSV_COLUMNS = ("name", "status", "accepted", "pieces", "split_count",
               "holes", "string_cost", "refold_rmse")


@dataclass(frozen=True)
class PipelineConfig:
    heuristics: tuple = ("steepest-edge", "greatest-increase",
                         "bfs-largest-face")
    attempts: int = 16
    max_splits: int = 3
    lam: float = None  # None: mean net edge length / pi, per piece
    hole_radius_mm: float = DEFAULT_HOLE_RADIUS_MM
    inset_mm: float = DEFAULT_INSET_MM
    scale_mm: float = DEFAULT_SCALE_MM
    seed: int = 0
    out_dir: str = "out"
    frames: int = 0
    jobs: int = 1

    def __post_init__(self):
        unknown = [h for h in self.heuristics if h not in HEURISTICS]
        if unknown or not self.heuristics:
            raise ValueError("bad heuristic order %r" % (self.heuristics,))
        for name in ("attempts", "scale_mm", "hole_radius_mm", "inset_mm",
                     "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)
        if self.lam is not None and self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.max_splits < 0 or self.frames < 0:
            raise ValueError("max_splits and frames must not be negative")


def load_mesh(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".obj":
        return parse_obj(text, label=path.stem)
    return parse_netlib(text, label=path.stem)


def _unfold_config(config, heuristic):
    return UnfoldConfig(heuristic=heuristic, max_attempts=config.attempts,
                        max_splits=config.max_splits)


def _unfold_any(mesh, config, rng):
    """Try the configured heuristics in order; first full success wins."""
    budget_error = None
    last_error = None
    for heuristic in config.heuristics:
        try:
            return unfold_with_fallback(mesh, _unfold_config(config,
                                                             heuristic), rng)
        except BudgetExceededError as err:
            budget_error = budget_error or err
        except PipelineError as err:
            last_error = err
    raise budget_error or last_error


def _plan_pieces(result, config):
    planned = []
    for idx, net in enumerate(result.nets):
        sets, depths = compute_join_sets(net)
        pruned = prune_join_sets(net, sets, depths)
        path = plan_string_path(net, pruned, lam=config.lam, piece=idx)
        planned.append((net, pruned, path))
    return planned


def _refold_reports(result, planned):
    reports = []
    for idx, (net, _, _) in enumerate(planned):
        state = fold_state_at(net, 1.0)
        reports.append((idx, verify_refold(net.mesh, net, state)))
    return reports


def run_pipeline(input_path, config, echo=print):
    """Full single-mesh run; returns the process exit code."""
    input_path = Path(input_path)
    out = Path(config.out_dir) / ("%s-seed%d" % (input_path.stem,
                                                 config.seed))
    try:
        mesh = load_mesh(input_path)
    except (OSError, MeshError) as err:
        echo("rejected: %s" % err)
        return EXIT_REJECTED

    report = validate_manifold(mesh)
    if not report.accepted:
        echo("rejected: mesh failed validation")
        for v in report.violations:
            echo("  %s: %s" % (v.kind, v.detail))
        return EXIT_REJECTED
    mesh = normalize_orientation(mesh)

    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(config.seed)
    try:
        result = _unfold_any(mesh, config, rng)
    except BudgetExceededError as err:
        echo("budget exhausted: %s" % err)
        for i, net in enumerate(err.partial):
            (out / ("partial_%02d.obj" % i)).write_text(
                _net_piece_obj(net))
        return EXIT_BUDGET
    except PipelineError as err:
        echo("failed (%s): %s" % (err.kind, err))
        return EXIT_INTERNAL

    try:
        planned = _plan_pieces(result, config)
        plan = build_plan(result, planned, seed=config.seed,
                          scale_mm=config.scale_mm,
                          hole_radius_mm=config.hole_radius_mm,
                          inset_mm=config.inset_mm)
        (out / "plan.json").write_bytes(export_plan(plan))
        (out / "net.svg").write_bytes(export_svg(plan))
        if len(result.nets) > 1:
            for i in range(len(result.nets)):
                (out / ("piece_%02d.svg" % i)).write_bytes(
                    export_svg(plan, piece=i))

        refolds = _refold_reports(result, planned)
        (out / "refold.json").write_text(json.dumps({
            "pieces": [{"piece": i, "passed": r.passed, "rmse": r.rmse,
                        "rmse_full": r.rmse_full, "join_error": r.join_error,
                        "tolerance": r.tolerance} for i, r in refolds],
        }, indent=2, sort_keys=True) + "\n")

        if config.frames:
            for i, net in enumerate(result.nets):
                export_frames(net, config.frames, out / ("frames_%02d" % i))

        from .report import render_net_preview
        render_net_preview(plan, out / "net_preview.png")
    except PipelineError as err:
        echo("failed (%s): %s" % (err.kind, err))
        return EXIT_INTERNAL

    holes = sum(len(p["holes"]) for p in plan["pieces"])
    cost = sum(p["string_cost"] for p in plan["pieces"])
    worst = max(r.rmse for _, r in refolds)
    ok = all(r.passed for _, r in refolds)
    echo("%s: %d piece(s), %d hole(s), string cost %.4f, "
         "refold rmse %.3e (%s)" % (mesh.label, len(result.nets), holes,
                                    cost, worst,
                                    "passed" if ok else "FAILED"))
    echo("artifacts in %s" % out)
    return EXIT_OK if ok else EXIT_INTERNAL


def _net_piece_obj(net):
    state = fold_state_at(net, 0.0)
    from .foldsim import frame_to_obj
    return frame_to_obj(state)


# ----------------------------------------------------------------------
# corpus sweeps

def corpus_row(args):
    """name, row dict, plan bytes (or None), wall seconds for one solid."""
    path, config = args
    name = Path(path).stem
    row = {"name": name, "status": "ok", "accepted": False, "pieces": 0,
           "split_count": 0, "holes": 0, "string_cost": "",
           "refold_rmse": ""}
    start = time.perf_counter()
    plan_bytes = None
    try:
        mesh = load_mesh(path)
    except (OSError, MeshError):
        row["status"] = "parse-error"
        return name, row, None, time.perf_counter() - start
    try:
        if not validate_manifold(mesh).accepted:
            row["status"] = "rejected"
            return name, row, None, time.perf_counter() - start
        mesh = normalize_orientation(mesh)
        rng = np.random.default_rng(config.seed)
        # each stage fills its columns before the next can fail, so a
        # fabrication error still leaves the unfold and refold evidence
        result = _unfold_any(mesh, config, rng)
        row["pieces"] = len(result.nets)
        row["split_count"] = result.split_count
        planned = _plan_pieces(result, config)
        row["string_cost"] = repr(sum(p.cost for _, _, p in planned))
        refolds = _refold_reports(result, planned)
        row["refold_rmse"] = repr(max(r.rmse for _, r in refolds))
        row["accepted"] = all(r.passed for _, r in refolds)
        plan = build_plan(result, planned, seed=config.seed,
                          scale_mm=config.scale_mm,
                          hole_radius_mm=config.hole_radius_mm,
                          inset_mm=config.inset_mm)
        plan_bytes = export_plan(plan)
        row["holes"] = sum(len(p["holes"]) for p in plan["pieces"])
    except PipelineError as err:
        row["status"] = err.kind
    except Exception:
        row["status"] = "error"
    return name, row, plan_bytes, time.perf_counter() - start


def run_corpus(directory, config, echo=print):
    directory = Path(directory)
    if not directory.is_dir():
        echo("not a directory: %s" % directory)
        return EXIT_REJECTED
    files = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() in (".obj", ".netlib"))
    out = Path(config.out_dir) / ("corpus-seed%d" % config.seed)
    out.mkdir(parents=True, exist_ok=True)

    jobs = [(str(p), config) for p in files]
    started = time.perf_counter()
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(corpus_row, jobs))
    else:
        results = [corpus_row(job) for job in jobs]
    elapsed = time.perf_counter() - started
    results.sort(key=lambda r: r[0])

    rows = []
    timings = []
    plans_dir = out / "plans"
    plans_dir.mkdir(exist_ok=True)
    for name, row, plan_bytes, wall in results:
        rows.append(row)
        timings.append((name, wall))
        if plan_bytes is not None:
            (plans_dir / ("%s.plan.json" % name)).write_bytes(plan_bytes)

    with open(out / "corpus.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    with open(out / "corpus_timing.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("name", "wall_seconds"))
        for name, wall in timings:
            writer.writerow((name, "%.4f" % wall))

    total = len(rows)
    ok = sum(1 for r in rows if r["status"] == "ok")
    accepted = sum(1 for r in rows if r["accepted"])
    unsplit = sum(1 for r in rows
                  if r["pieces"] > 0 and r["split_count"] == 0)
    lines = [
        "corpus: %d solids in %s" % (total, directory),
        "ok: %d/%d  refold-accepted: %d/%d  split-free: %d/%d"
        % (ok, total, accepted, total, unsplit, total),
        "wall time: %.1f s" % elapsed,
    ]
    for row in rows:
        if row["status"] != "ok":
            lines.append("  %s: %s" % (row["name"], row["status"]))
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        echo(line)

    if rows:
        from .report import render_corpus_overview
        render_corpus_overview(rows, out / "corpus_overview.png")
    echo("artifacts in %s" % out)
    return EXIT_OK


# ----------------------------------------------------------------------
# argument handling

def _add_common(parser):
    parser.add_argument("--heuristic", action="append", choices=HEURISTICS,
                        help="heuristic order; repeat for fallbacks")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--attempts", type=int)
    parser.add_argument("--max-splits", type=int, dest="max_splits")
    parser.add_argument("--lambda", type=float, dest="lam",
                        help="turning-cost weight (default: mean edge / pi)")
    parser.add_argument("--scale", type=float, dest="scale_mm",
                        help="millimetres per model unit")
    parser.add_argument("--hole-radius", type=float, dest="hole_radius_mm")
    parser.add_argument("--inset", type=float, dest="inset_mm")
    parser.add_argument("--out", dest="out_dir")
    parser.add_argument("--config", help="JSON file with config defaults")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pullupnet",
        description="Unfold polyhedra into pull-up nets: cut SVG, "
                    "fabrication plan, fold animation.")
    sub = parser.add_subparsers(dest="command", required=True)

    one = sub.add_parser("unfold", help="run one mesh end to end")
    one.add_argument("input", help="OBJ or Netlib polyhedron file")
    one.add_argument("--frames", type=int,
                     help="export this many fold animation frames")
    _add_common(one)

    many = sub.add_parser("corpus", help="sweep a directory of solids")
    many.add_argument("directory")
    many.add_argument("--jobs", type=int, help="parallel workers")
    _add_common(many)
    return parser


def make_config(args):
    """Defaults < config file < explicit flags."""
    values = {}
    if getattr(args, "config", None):
        values.update(json.loads(Path(args.config).read_text()))
    for f in fields(PipelineConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    if getattr(args, "heuristic", None):
        values["heuristics"] = tuple(args.heuristic)
    values.pop("heuristic", None)
    if "heuristics" in values:
        values["heuristics"] = tuple(values["heuristics"])
    return PipelineConfig(**values)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as err:
        print("bad configuration: %s" % err, file=sys.stderr)
        return EXIT_REJECTED
    try:
        if args.command == "unfold":
            return run_pipeline(args.input, config)
        return run_corpus(args.directory, config)
    except PipelineError as err:
        print("failed (%s): %s" % (err.kind, err), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
