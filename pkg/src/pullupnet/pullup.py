"""Plan the pull-up strings: joins, pruning, and hole routing.

When a net folds up, every mesh vertex whose flat copies sit apart must be
pulled together.  Vertices whose whole face fan survived the cut tree are
rigid on their own (depth 0); everyone else acquires a rigidity depth by
breadth-first search along the net outline and lands in a join set with the
other copies of its mesh vertex.  Join sets that the fold makes redundant
are pruned away; the survivors become string holes, routed by a cheapest
open path that keeps each set's holes consecutive.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .mesh import PipelineError

EXACT_THRESHOLD = 12


class PullupError(PipelineError):
    pass


class AlgorithmDivergenceError(PullupError):
    """Outline BFS failed to reach every net vertex."""

    kind = "algorithm-divergence"


class DanglingHoleError(PullupError):
    """A single hole cannot anchor a string."""

    kind = "dangling-hole"


@dataclass(frozen=True)
class JoinSet:
    """Copies of one mesh vertex that must be tied together.

    ``members`` are surviving net-vertex ids; once pruned, the original
    members are kept for reporting but no holes are cut for them.
    """

    mesh_vertex: int
    members: tuple
    depth: int
    pruned: bool = False


@dataclass(frozen=True)
class StringPath:
    piece: int
    hole_sequence: tuple
    total_length: float
    total_turning: float
    cost: float
    lam: float


# ----------------------------------------------------------------------
# rigidity depth

def compute_join_sets(net):
    """Join sets and the per-net-vertex rigidity depth map.

    Depth 0 means the net vertex carries every face incident to its mesh
    vertex (the weld groups are connected by construction, so a full count
    is a full fan).  Depths then grow level by level along the outline
    from the depth-0 seeds.  Every copy of a mesh vertex joins the same
    set, whose depth is the minimum over its members.
    """
    mesh = net.mesh
    depths = {}
    for v in net.vertices:
        if len(v.corners) == len(mesh.vertex_faces(v.mesh_vertex)):
            depths[v.index] = 0

    neighbors = net.boundary_neighbors()
    frontier = sorted(depths)
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > len(net.vertices):
            raise AlgorithmDivergenceError(
                "outline BFS exceeded %d rounds" % len(net.vertices))
        depth = rounds
        nxt = []
        for v in frontier:
            for u in neighbors[v]:
                if u not in depths:
                    depths[u] = depth
                    nxt.append(u)
        frontier = sorted(set(nxt))
    if len(depths) != len(net.vertices):
        missing = [v.index for v in net.vertices if v.index not in depths]
        raise AlgorithmDivergenceError(
            "%d net vertices unreached from any depth-0 seed (first: %r)"
            % (len(missing), missing[:5]))

    grouped = {}
    for v in net.vertices:
        if depths[v.index] > 0:
            grouped.setdefault(v.mesh_vertex, []).append(v.index)
    join_sets = []
    for mv in sorted(grouped):
        members = tuple(sorted(grouped[mv]))
        join_sets.append(JoinSet(
            mesh_vertex=mv, members=members,
            depth=min(depths[m] for m in members)))
    return join_sets, depths


# ----------------------------------------------------------------------
# pruning

def prune_join_sets(net, join_sets, depths):
    """Drop joins the fold makes redundant.

    A member may go only when (1..3) all hold: if its set is down to two,
    both go together; it must sit one boundary edge away from a joined
    vertex of strictly greater depth; and every face it touches must have
    at least four corners, so that losing this one still leaves three to
    hold the face (counted against the original net, where every corner
    is either depth 0 or a set member: triangles always refuse).  Members
    are scanned deepest first, then by ascending id, to a fixed point.
    """
    mesh = net.mesh
    neighbors = net.boundary_neighbors()
    surviving = {s.mesh_vertex: set(s.members) for s in join_sets}
    joined = {v.index for v in net.vertices}

    def faces_allow(member):
        return all(len(mesh.faces[f]) >= 4
                   for f, _ in net.vertices[member].corners)

    changed = True
    while changed:
        changed = False
        order = sorted(
            ((m, mv) for mv, ms in surviving.items() for m in ms),
            key=lambda m_mv: (-depths[m_mv[0]], m_mv[0]))
        for m, mv in order:
            if m not in surviving[mv]:
                continue
            deeper = any(u in joined and depths[u] > depths[m]
                         for u in neighbors[m])
            if not deeper or not faces_allow(m):
                continue
            surviving[mv].discard(m)
            joined.discard(m)
            if len(surviving[mv]) == 1:
                last = surviving[mv].pop()
                joined.discard(last)
            changed = True

    out = []
    for s in join_sets:
        left = surviving[s.mesh_vertex]
        if left:
            out.append(JoinSet(mesh_vertex=s.mesh_vertex,
                               members=tuple(sorted(left)),
                               depth=s.depth, pruned=False))
        else:
            out.append(JoinSet(mesh_vertex=s.mesh_vertex, members=s.members,
                               depth=s.depth, pruned=True))
    return out


# ----------------------------------------------------------------------
# string routing

def path_cost(points, lam):
    """(length, turning, cost) of an open polyline, summed front to back."""
    length = 0.0
    turning = 0.0
    for i in range(1, len(points)):
        length += math.dist(points[i - 1], points[i])
    for i in range(1, len(points) - 1):
        ux = points[i][0] - points[i - 1][0]
        uy = points[i][1] - points[i - 1][1]
        wx = points[i + 1][0] - points[i][0]
        wy = points[i + 1][1] - points[i][1]
        nu = math.hypot(ux, uy)
        nw = math.hypot(wx, wy)
        if nu < 1e-12 or nw < 1e-12:
            continue
        turning += math.atan2(abs(ux * wy - uy * wx), ux * wx + uy * wy)
    return length, turning, length + lam * turning


def default_lambda(net):
    """One mean edge length buys a full U-turn."""
    return net.mean_edge_length() / math.pi


def plan_string_path(net, join_sets, lam=None, piece=0,
                     exact_threshold=EXACT_THRESHOLD):
    """Cheapest open path through every hole, sets kept consecutive.

    Small instances are solved exactly by branch and bound over set orders
    and member orders; larger ones fall back to nearest-neighbor insertion
    refined by block-aware 2-opt.
    """
    if lam is None:
        lam = default_lambda(net)
    active = [s for s in join_sets if not s.pruned]
    holes = [m for s in active for m in s.members]
    if len(holes) == 0:
        return StringPath(piece=piece, hole_sequence=(), total_length=0.0,
                          total_turning=0.0, cost=0.0, lam=lam)
    if len(holes) == 1:
        raise DanglingHoleError(
            "single hole at net vertex %d cannot be strung" % holes[0])

    pos = {v.index: v.position for v in net.vertices}
    blocks = [tuple(s.members) for s in sorted(active,
                                               key=lambda s: s.mesh_vertex)]
    if len(holes) <= exact_threshold:
        sequence = _exact_path(blocks, pos, lam)
    else:
        sequence = _two_opt_path(blocks, pos, lam)
    length, turning, cost = path_cost([pos[h] for h in sequence], lam)
    return StringPath(piece=piece, hole_sequence=tuple(sequence),
                      total_length=length, total_turning=turning,
                      cost=cost, lam=lam)


def _exact_path(blocks, pos, lam):
    best = {"cost": math.inf, "seq": None}

    def extend(seq, remaining, length, turning):
        cost_now = length + lam * turning
        if cost_now >= best["cost"]:
            return
        if not remaining:
            if cost_now < best["cost"]:
                best["cost"] = cost_now
                best["seq"] = list(seq)
            return
        for i, block in enumerate(remaining):
            rest = remaining[:i] + remaining[i + 1:]
            for perm in itertools.permutations(block):
                nl, nt = length, turning
                ok = True
                trial = list(seq)
                for h in perm:
                    nl, nt = _extend_cost(trial, pos, h, nl, nt)
                    trial.append(h)
                    if nl + lam * nt >= best["cost"]:
                        ok = False
                        break
                if ok:
                    extend(trial, rest, nl, nt)

    extend([], list(blocks), 0.0, 0.0)
    # recompute front to back so the reported cost is bit-identical to a
    # plain enumeration of the same sequence
    length, turning, cost = path_cost([pos[h] for h in best["seq"]], lam)
    assert abs(cost - best["cost"]) <= 1e-9 * max(1.0, cost)
    return best["seq"]


def _extend_cost(seq, pos, hole, length, turning):
    if seq:
        length = length + math.dist(pos[seq[-1]], pos[hole])
    if len(seq) >= 2:
        a, b, c = pos[seq[-2]], pos[seq[-1]], pos[hole]
        ux, uy = b[0] - a[0], b[1] - a[1]
        wx, wy = c[0] - b[0], c[1] - b[1]
        if math.hypot(ux, uy) >= 1e-12 and math.hypot(wx, wy) >= 1e-12:
            turning = turning + math.atan2(abs(ux * wy - uy * wx),
                                           ux * wx + uy * wy)
    return length, turning


def _open_path_length(seq, pos):
    return sum(math.dist(pos[seq[i - 1]], pos[seq[i]])
               for i in range(1, len(seq)))


def _intra_block_order(block, pos):
    """Fixed traversal order for one block: shortest open path through it.

    Exact for small blocks; member counts track mesh vertex degree, so the
    factorial route would explode on kis-style solids with degree-8 apexes.
    Larger blocks get nearest-neighbor plus plain 2-opt instead.
    """
    if len(block) <= 2:
        return list(block)
    if len(block) <= 6:
        best = None
        best_len = math.inf
        for perm in itertools.permutations(block):
            if perm[0] > perm[-1]:
                continue  # a path and its reverse have equal length
            length = _open_path_length(perm, pos)
            if length < best_len:
                best_len = length
                best = list(perm)
        return best
    order = [block[0]]
    remaining = list(block[1:])
    while remaining:
        dists = [math.dist(pos[order[-1]], pos[h]) for h in remaining]
        order.append(remaining.pop(dists.index(min(dists))))
    best_len = _open_path_length(order, pos)
    improved = True
    passes = 0
    while improved and passes < 50:
        improved = False
        passes += 1
        for i in range(len(order) - 1):
            for j in range(i + 1, len(order)):
                trial = order[:i] + order[i:j + 1][::-1] + order[j + 1:]
                trial_len = _open_path_length(trial, pos)
                if trial_len < best_len - 1e-12:
                    order, best_len = trial, trial_len
                    improved = True
    return order


def _two_opt_path(blocks, pos, lam):
    # Member order inside each block is fixed up front; the tour then works
    # on oriented segments, so every trial renders by concatenation instead
    # of a factorial re-optimization per candidate.
    segments = [_intra_block_order(b, pos) for b in blocks]
    order = [segments[0]]
    remaining = segments[1:]
    while remaining:
        tail = pos[order[-1][-1]]
        best_i, best_seg, best_d = 0, None, math.inf
        for i, seg in enumerate(remaining):
            for cand in (seg, seg[::-1]):
                d = math.dist(tail, pos[cand[0]])
                if d < best_d:
                    best_i, best_seg, best_d = i, cand, d
        order.append(best_seg)
        remaining.pop(best_i)

    def cost_of(segs):
        seq = [h for seg in segs for h in seg]
        _, _, cost = path_cost([pos[h] for h in seq], lam)
        return cost, seq

    best_cost, best_seq = cost_of(order)
    improved = True
    passes = 0
    while improved and passes < 200:
        improved = False
        passes += 1
        for i in range(len(order)):
            for j in range(i, len(order)):
                if i == j:
                    # orientation flip of a single block
                    trial = order[:i] + [order[i][::-1]] + order[i + 1:]
                else:
                    flipped = [seg[::-1] for seg in order[i:j + 1][::-1]]
                    trial = order[:i] + flipped + order[j + 1:]
                trial_cost, trial_seq = cost_of(trial)
                if trial_cost < best_cost - 1e-12:
                    order = trial
                    best_cost, best_seq = trial_cost, trial_seq
                    improved = True
    return best_seq
