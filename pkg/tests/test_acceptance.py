"""Acceptance gate: the nine shipping criteria, one test and one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS lines;
each test prints its verdict and the measured numbers behind it.
"""

import csv
import itertools
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from pullupnet.cli import (
    EXIT_OK,
    PipelineConfig,
    _unfold_any,
    run_corpus,
    run_pipeline,
)
from pullupnet.foldsim import fold_state_at, verify_refold
from pullupnet.mesh import parse_netlib, parse_obj
from pullupnet.pullup import (
    _exact_path,
    compute_join_sets,
    path_cost,
    prune_join_sets,
)
from pullupnet.solids import (
    archimedean_solids,
    cube,
    platonic_solids,
)
from pullupnet.unfold import (
    HEURISTICS,
    UnfoldConfig,
    build_cut_tree,
    detect_overlaps,
    unfold_with_fallback,
)

DATA = Path(__file__).resolve().parent.parent / "src" / "pullupnet" / "data"
CORPUS = DATA / "corpus"


def verdict(n, ok, detail):
    line = "criterion %d %s: %s" % (n, "PASS" if ok else "FAIL", detail)
    print("\n" + line)
    assert ok, line


@pytest.fixture(scope="session")
def corpus_runs(tmp_path_factory):
    """Two full corpus sweeps with the same seed; first one timed."""
    base = tmp_path_factory.mktemp("acceptance")
    quiet = lambda *a, **k: None
    config_a = PipelineConfig(out_dir=str(base / "a"))
    config_b = PipelineConfig(out_dir=str(base / "b"))
    started = time.perf_counter()
    assert run_corpus(CORPUS, config_a, echo=quiet) == EXIT_OK
    elapsed = time.perf_counter() - started
    assert run_corpus(CORPUS, config_b, echo=quiet) == EXIT_OK
    run_a = base / "a" / "corpus-seed0"
    run_b = base / "b" / "corpus-seed0"
    with open(run_a / "corpus.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {"rows": rows, "run_a": run_a, "run_b": run_b, "elapsed": elapsed}


def test_criterion_1_platonic_single_piece():
    started = time.perf_counter()
    bad = []
    for mesh in platonic_solids():
        result = unfold_with_fallback(mesh, UnfoldConfig(),
                                      np.random.default_rng(0))
        overlaps = [o for net in result.nets
                    for o in detect_overlaps(net)]
        if result.split_count != 0 or len(result.nets) != 1 or overlaps:
            bad.append(mesh.label)
    elapsed = time.perf_counter() - started
    verdict(1, not bad and elapsed < 1.0,
            "5 regular solids single-piece overlap-free in %.2fs"
            % elapsed if not bad else "failing: %s" % bad)


def test_criterion_2_corpus_refold(corpus_runs):
    unfolded = [r for r in corpus_runs["rows"] if int(r["pieces"]) > 0]
    bad = [r["name"] for r in unfolded if r["accepted"] != "True"]
    rmse_max = max(float(r["refold_rmse"]) for r in unfolded)
    verdict(2, bool(unfolded) and not bad,
            "%d/%d unfolded solids refold within tolerance (worst rmse "
            "%.2e)" % (len(unfolded) - len(bad), len(unfolded), rmse_max))


def test_criterion_3_join_set_oracle():
    mismatches = []
    solids = platonic_solids() + archimedean_solids()
    for mesh in solids:
        result = unfold_with_fallback(mesh, UnfoldConfig(),
                                      np.random.default_rng(0))
        for net in result.nets:
            sets, _ = compute_join_sets(net)
            got = {s.mesh_vertex: tuple(sorted(s.members)) for s in sets}
            want = {}
            for mv in range(len(mesh.vertices)):
                copies = net.copies_of(mv)
                if len(copies) >= 2:
                    want[mv] = tuple(sorted(c.index for c in copies))
            if got != want:
                mismatches.append(mesh.label)
    verdict(3, not mismatches,
            "join sets equal the copy partition on %d solids"
            % len(solids) if not mismatches
            else "mismatch on %s" % mismatches)


def test_criterion_4_cube_pruning_refolds():
    mesh = cube()
    result = unfold_with_fallback(
        mesh, UnfoldConfig(heuristic="bfs-largest-face"),
        np.random.default_rng(0))
    net = result.nets[0]
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)
    depth1 = [s for s in pruned
              if all(depths[m] == 1 for m in s.members)]
    survivors = [s for s in pruned if not s.pruned]
    refold = verify_refold(mesh, net, fold_state_at(net, 1.0))
    ok = (len(depth1) == 2 and all(s.pruned for s in depth1)
          and survivors and refold.passed)
    verdict(4, ok,
            "all %d pure depth-1 sets pruned, %d sets kept, cube refolds "
            "closed (rmse %.2e)" % (len(depth1), len(survivors),
                                    refold.rmse))


def test_criterion_5_string_path_optimality():
    started = time.perf_counter()
    checked = 0
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        blocks = []
        total = 0
        while total < 8:
            size = int(rng.integers(2, 4))
            if total + size > 8:
                break
            start = 100 * len(blocks)
            blocks.append(tuple(range(start, start + size)))
            total += size
        pos = {h: (float(rng.uniform(0, 10)), float(rng.uniform(0, 10)))
               for b in blocks for h in b}
        lam = float(rng.uniform(0.1, 2.0))

        seq = _exact_path(blocks, pos, lam)
        _, _, planner = path_cost([pos[h] for h in seq], lam)

        best = math.inf
        for order in itertools.permutations(blocks):
            for members in itertools.product(
                    *[itertools.permutations(b) for b in order]):
                flat = [h for m in members for h in m]
                _, _, cost = path_cost([pos[h] for h in flat], lam)
                if cost < best:
                    best = cost
        assert planner == best, "seed %d: %r != %r" % (seed, planner, best)
        checked += 1
    elapsed = time.perf_counter() - started
    verdict(5, checked == 100 and elapsed < 10.0,
            "%d instances matched exhaustive enumeration exactly in %.1fs"
            % (checked, elapsed))


def test_criterion_6_spanning_tree_invariants():
    violations = []
    for path in sorted(CORPUS.glob("*.netlib")):
        mesh = parse_netlib(path.read_text(), label=path.stem)
        for heuristic in HEURISTICS:
            tree = build_cut_tree(mesh, heuristic,
                                  np.random.default_rng(0))
            F, V = len(mesh.faces), len(mesh.vertices)
            if len(tree.fold_edges) != F - 1:
                violations.append((path.stem, heuristic, "fold-count"))
            if len(tree.cut_edges) != V - 1:
                violations.append((path.stem, heuristic, "cut-count"))
            if not _connected(tree.fold_edges, F,
                              lambda e: mesh.edges[e].faces):
                violations.append((path.stem, heuristic, "fold-forest"))
            if not _connected(tree.cut_edges, V,
                              lambda e: (mesh.edges[e].u,
                                         mesh.edges[e].v)):
                violations.append((path.stem, heuristic, "cut-forest"))
    verdict(6, not violations,
            "146 solids x 3 heuristics: complementary spanning trees, "
            "0 violations" if not violations
            else "violations: %s" % violations[:5])


def _connected(edges, n_nodes, endpoints):
    """Edge count == n-1 plus connectivity makes the subgraph a tree."""
    adj = {i: [] for i in range(n_nodes)}
    for e in edges:
        a, b = endpoints(e)
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = [0]
    while queue:
        for nxt in adj[queue.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == n_nodes


def test_criterion_7_corpus_scale(corpus_runs):
    rows = corpus_runs["rows"]
    total = len(rows)
    unsplit = sum(1 for r in rows
                  if int(r["pieces"]) > 0 and int(r["split_count"]) == 0)
    unclassified = [r["name"] for r in rows if not r["status"]]
    elapsed = corpus_runs["elapsed"]
    ok = (unsplit >= 0.9 * total and not unclassified
          and elapsed < 120.0)
    verdict(7, ok,
            "%d/%d split-free (%.0f%%), 100%% classified, %.1fs wall"
            % (unsplit, total, 100.0 * unsplit / total, elapsed))


def test_criterion_8_bunny_end_to_end(tmp_path):
    config = PipelineConfig(hole_radius_mm=1.0, inset_mm=5.0,
                            out_dir=str(tmp_path))
    quiet = lambda *a, **k: None
    code = run_pipeline(DATA / "bunny_lowpoly.obj", config, echo=quiet)

    mesh = parse_obj((DATA / "bunny_lowpoly.obj").read_text(),
                     label="bunny_lowpoly")
    result = _unfold_any(mesh, config, np.random.default_rng(config.seed))
    overlaps = [o for net in result.nets for o in detect_overlaps(net)]
    refolds = [verify_refold(net.mesh, net, fold_state_at(net, 1.0))
               for net in result.nets]
    ok = (code == EXIT_OK and not overlaps
          and all(r.passed for r in refolds))
    verdict(8, ok,
            "%d-face bunny -> %d piece(s), overlap-free, refold rmse %.2e"
            % (len(mesh.faces), len(result.nets),
               max(r.rmse for r in refolds)))


def test_criterion_9_corpus_determinism(corpus_runs):
    run_a, run_b = corpus_runs["run_a"], corpus_runs["run_b"]
    same_csv = ((run_a / "corpus.csv").read_bytes()
                == (run_b / "corpus.csv").read_bytes())
    plans_a = sorted((run_a / "plans").glob("*.plan.json"))
    plans_b = sorted((run_b / "plans").glob("*.plan.json"))
    same_plans = ([p.name for p in plans_a] == [p.name for p in plans_b]
                  and all(a.read_bytes() == b.read_bytes()
                          for a, b in zip(plans_a, plans_b)))
    verdict(9, same_csv and same_plans,
            "rerun byte-identical: corpus.csv and %d plan files"
            % len(plans_a))
