"""Join sets, rigidity depths, pruning, and string routing."""
import itertools
import math
import random

import networkx as nx
import numpy as np
import pytest

from pullupnet import solids
from pullupnet.pullup import (
    DanglingHoleError,
    JoinSet,
    StringPath,
    _exact_path,
    _two_opt_path,
    compute_join_sets,
    default_lambda,
    path_cost,
    plan_string_path,
    prune_join_sets,
)
from pullupnet.unfold import UnfoldConfig, build_cut_tree, place_faces, \
    unfold_with_fallback

SOLIDS = [
    solids.tetrahedron,
    solids.cube,
    solids.octahedron,
    solids.dodecahedron,
    solids.icosahedron,
    solids.cuboctahedron,
    solids.truncated_tetrahedron,
    lambda: solids.prism(5),
    lambda: solids.antiprism(4),
]


def net_of(build, heuristic="bfs-largest-face", seed=0):
    m = build()
    return place_faces(m, build_cut_tree(m, heuristic,
                                         np.random.default_rng(seed)))


# ----------------------------------------------------------------------
# rigidity depths

@pytest.mark.parametrize("build", SOLIDS)
def test_depths_match_outline_distance_oracle(build):
    # depth is the hop count along the outline to the nearest vertex that
    # kept its whole face fan
    net = net_of(build)
    sets, depths = compute_join_sets(net)
    seeds = [v for v, d in depths.items() if d == 0]
    graph = nx.Graph()
    graph.add_nodes_from(v.index for v in net.vertices)
    for seg in net.boundary:
        graph.add_edge(seg.net_a, seg.net_b)
    oracle = nx.multi_source_dijkstra_path_length(graph, seeds)
    assert set(depths) == {v.index for v in net.vertices}
    for v, d in depths.items():
        assert d == int(oracle[v])
    del sets


@pytest.mark.parametrize("build", SOLIDS)
def test_depth_zero_iff_cut_tree_leaf(build):
    # a closed-mesh vertex keeps its whole fan exactly when only one cut
    # edge touches it
    net = net_of(build)
    _, depths = compute_join_sets(net)
    degree = {v: 0 for v in range(len(net.mesh.vertices))}
    for ei in net.tree.cut_edges:
        degree[net.mesh.edges[ei].u] += 1
        degree[net.mesh.edges[ei].v] += 1
    for nv in net.vertices:
        assert (depths[nv.index] == 0) == (degree[nv.mesh_vertex] == 1)


@pytest.mark.parametrize("build", SOLIDS)
@pytest.mark.parametrize("heuristic", ("steepest-edge", "bfs-largest-face"))
def test_join_sets_partition_the_copies(build, heuristic):
    net = net_of(build, heuristic)
    sets, depths = compute_join_sets(net)
    in_sets = [m for s in sets for m in s.members]
    assert len(in_sets) == len(set(in_sets))
    zero = {v for v, d in depths.items() if d == 0}
    assert zero | set(in_sets) == {v.index for v in net.vertices}
    assert zero.isdisjoint(in_sets)
    for s in sets:
        assert len(s.members) >= 2
        assert s.members == tuple(sorted(s.members))
        assert s.depth == min(depths[m] for m in s.members)
        assert s.depth >= 1
        assert not s.pruned
        copies = {v.index for v in net.copies_of(s.mesh_vertex)}
        assert set(s.members) == copies


def test_cube_cross_depths_and_sets():
    net = net_of(solids.cube)
    sets, depths = compute_join_sets(net)
    # four welded bottom corners, eight arm corners, two far corners
    assert sorted(depths.values()) == [0] * 4 + [1] * 8 + [2] * 2
    by_size = sorted(len(s.members) for s in sets)
    assert by_size == [2, 2, 3, 3]
    assert all(s.depth == 1 for s in sets)
    # each pair sits entirely at depth 1, each triple reaches depth 2
    for s in sets:
        member_depths = sorted(depths[m] for m in s.members)
        if len(s.members) == 2:
            assert member_depths == [1, 1]
        else:
            assert member_depths == [1, 1, 2]


def test_tetrahedron_star_single_apex_set():
    net = net_of(solids.tetrahedron)
    sets, depths = compute_join_sets(net)
    assert sorted(depths.values()) == [0, 0, 0, 1, 1, 1]
    assert len(sets) == 1
    (apex,) = sets
    assert len(apex.members) == 3
    assert apex.depth == 1


def test_split_pieces_plan_independently():
    # a flat piece whose vertices all keep their fans needs no strings
    from test_unfold import saddle_fan
    result = unfold_with_fallback(saddle_fan(),
                                  UnfoldConfig(heuristic="bfs-largest-face"),
                                  np.random.default_rng(0))
    assert result.split_count >= 1
    for net in result.nets:
        sets, depths = compute_join_sets(net)
        assert set(depths) == {v.index for v in net.vertices}
        pruned = prune_join_sets(net, sets, depths)
        path = plan_string_path(net, pruned)
        holes = [m for s in pruned if not s.pruned for m in s.members]
        assert sorted(path.hole_sequence) == sorted(holes)


# ----------------------------------------------------------------------
# pruning

def joined_after(net, depths, pruned_sets):
    alive = {v for v, d in depths.items() if d == 0}
    for s in pruned_sets:
        if not s.pruned:
            alive.update(s.members)
    return alive


@pytest.mark.parametrize("build", SOLIDS)
def test_pruning_reaches_a_fixed_point(build):
    net = net_of(build)
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)
    alive = joined_after(net, depths, pruned)
    neighbors = net.boundary_neighbors()
    for s in pruned:
        if s.pruned:
            continue
        for m in s.members:
            removable = (
                any(x in alive and depths[x] > depths[m]
                    for x in neighbors[m])
                and all(len(net.mesh.faces[f]) >= 4
                        for f, _ in net.vertices[m].corners))
            assert not removable


@pytest.mark.parametrize("build", SOLIDS)
def test_removed_members_touched_only_wide_faces(build):
    # criteria-gated removals never touch a triangle; only the unconditional
    # lone-partner removal may, and a set has at most one of those
    net = net_of(build)
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)

    def narrow(m):
        return any(len(net.mesh.faces[f]) < 4
                   for f, _ in net.vertices[m].corners)

    for before, after in zip(sets, pruned):
        assert after.mesh_vertex == before.mesh_vertex
        assert after.depth == before.depth
        if after.pruned:
            assert after.members == before.members
            assert sum(1 for m in before.members if narrow(m)) <= 1
        else:
            assert len(after.members) >= 2
            removed = set(before.members) - set(after.members)
            assert not any(narrow(m) for m in removed)


def test_triangle_faces_block_all_pruning():
    # every face of a deltahedron refuses to drop below three anchors
    for build in (solids.octahedron, solids.icosahedron):
        net = net_of(build)
        sets, depths = compute_join_sets(net)
        assert prune_join_sets(net, sets, depths) == sets


def test_cube_cross_prunes_pairs_keeps_triples():
    net = net_of(solids.cube)
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)
    pairs = [s for s in pruned if len(s.members) == 2]
    triples = [s for s in pruned if len(s.members) == 3]
    assert len(pairs) == 2 and all(s.pruned for s in pairs)
    assert len(triples) == 2 and not any(s.pruned for s in triples)
    holes = [m for s in pruned if not s.pruned for m in s.members]
    assert len(holes) == 6


def test_dodecahedron_pruning_is_structurally_valid():
    net = net_of(solids.dodecahedron)
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)
    assert len(pruned) == len(sets)
    holes = [m for s in pruned if not s.pruned for m in s.members]
    assert len(holes) >= 2
    # wide faces leave room to prune something
    assert any(s.pruned or len(s.members) < len(o.members)
               for s, o in zip(pruned, sets)) or pruned == sets


# ----------------------------------------------------------------------
# string paths

def oracle_best_cost(blocks, pos, lam):
    """Plain enumeration over block orders and member orders."""
    best = math.inf
    for order in itertools.permutations(blocks):
        for choice in itertools.product(
                *[itertools.permutations(b) for b in order]):
            seq = [h for block in choice for h in block]
            _, _, cost = path_cost([pos[h] for h in seq], lam)
            if cost < best:
                best = cost
    return best


def random_instance(seed):
    rng = random.Random(seed)
    blocks = []
    pos = {}
    total = 0
    next_id = 0
    while total < 5:
        size = rng.choice((2, 2, 3))
        if total + size > 8:
            break
        block = tuple(range(next_id, next_id + size))
        next_id += size
        total += size
        blocks.append(block)
        for h in block:
            pos[h] = (rng.uniform(0, 10), rng.uniform(0, 10))
    return blocks, pos


@pytest.mark.parametrize("seed", range(25))
def test_exact_path_matches_enumeration(seed):
    blocks, pos = random_instance(seed)
    lam = 1.0 + (seed % 5) / 3.0
    seq = _exact_path(blocks, pos, lam)
    _, _, cost = path_cost([pos[h] for h in seq], lam)
    assert cost == oracle_best_cost(blocks, pos, lam)
    assert sorted(seq) == sorted(h for b in blocks for h in b)
    for block in blocks:
        idx = sorted(seq.index(h) for h in block)
        assert idx == list(range(idx[0], idx[0] + len(block)))


@pytest.mark.parametrize("seed", range(8))
def test_two_opt_path_is_valid_and_no_better_than_exact(seed):
    blocks, pos = random_instance(seed)
    lam = 0.7
    greedy = _two_opt_path(blocks, pos, lam)
    assert sorted(greedy) == sorted(h for b in blocks for h in b)
    for block in blocks:
        idx = sorted(greedy.index(h) for h in block)
        assert idx == list(range(idx[0], idx[0] + len(block)))
    _, _, greedy_cost = path_cost([pos[h] for h in greedy], lam)
    exact = _exact_path(blocks, pos, lam)
    _, _, exact_cost = path_cost([pos[h] for h in exact], lam)
    assert greedy_cost >= exact_cost - 1e-9


def test_cube_path_exact_and_consecutive():
    net = net_of(solids.cube)
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)
    path = plan_string_path(net, pruned)
    assert len(path.hole_sequence) == 6
    assert path.cost == pytest.approx(path.total_length
                                      + path.lam * path.total_turning)
    pos = {v.index: v.position for v in net.vertices}
    blocks = [s.members for s in pruned if not s.pruned]
    assert path.cost == oracle_best_cost(blocks, pos, path.lam)
    for s in pruned:
        if s.pruned:
            continue
        idx = sorted(path.hole_sequence.index(m) for m in s.members)
        assert idx == list(range(idx[0], idx[0] + len(s.members)))


def test_default_lambda_is_mean_edge_over_pi():
    net = net_of(solids.cube)
    assert default_lambda(net) == pytest.approx(net.mean_edge_length()
                                                / math.pi)
    # all cube net edges are unit, so the mean is exactly one
    assert net.mean_edge_length() == pytest.approx(1.0)


def test_empty_and_dangling_paths():
    net = net_of(solids.cube)
    empty = plan_string_path(net, [])
    assert empty.hole_sequence == ()
    assert empty.cost == 0.0
    lonely = [JoinSet(mesh_vertex=0, members=(0,), depth=1)]
    with pytest.raises(DanglingHoleError):
        plan_string_path(net, lonely)


def test_path_threshold_switches_to_heuristic():
    net = net_of(solids.cube)
    sets, depths = compute_join_sets(net)
    pruned = prune_join_sets(net, sets, depths)
    exact = plan_string_path(net, pruned)
    greedy = plan_string_path(net, pruned, exact_threshold=0)
    assert sorted(greedy.hole_sequence) == sorted(exact.hole_sequence)
    assert greedy.cost >= exact.cost - 1e-9


def test_planning_is_deterministic():
    a = plan_string_path(*_cube_plan_inputs())
    b = plan_string_path(*_cube_plan_inputs())
    assert a == b


def _cube_plan_inputs():
    net = net_of(solids.cube)
    sets, depths = compute_join_sets(net)
    return net, prune_join_sets(net, sets, depths)


def test_turning_cost_geometry():
    # collinear holes turn nothing; a right angle turns pi/2
    straight = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]
    bent = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]
    length, turning, cost = path_cost(straight, 2.0)
    assert (length, turning, cost) == (2.0, 0.0, 2.0)
    length, turning, cost = path_cost(bent, 2.0)
    assert length == pytest.approx(2.0)
    assert turning == pytest.approx(math.pi / 2)
    assert cost == pytest.approx(2.0 + math.pi)
    assert isinstance(StringPath(0, (), 0.0, 0.0, 0.0, 1.0), StringPath)
