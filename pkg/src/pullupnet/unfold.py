"""Unfold a polyhedral mesh into one or more flat, non-overlapping nets.

The unfolding is driven by a cut tree: a spanning tree of the mesh vertices
whose edges get sliced open.  Its complement over the interior edges is a
spanning tree of the face adjacency graph (the fold tree), along which faces
are laid flat one rigid motion at a time.  When the flat layout
self-intersects, the mesh is split along a plane and the halves are unfolded
separately, within a configurable budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import (
    DegenerateGeometryError,
    Mesh,
    PipelineError,
    face_edges,
)

HEURISTICS = ("steepest-edge", "greatest-increase", "bfs-largest-face")


class UnfoldError(PipelineError):
    pass


class DegenerateDirectionError(UnfoldError):
    """Every sampled direction produced ties or extra local maxima."""

    kind = "degenerate-direction"


class NumericInstabilityError(UnfoldError):
    """Flat placement drifted from an isometry."""

    kind = "numeric-instability"


class OverlapError(UnfoldError):
    """All attempts at a single-piece net self-intersected."""

    kind = "overlapping-net"

    def __init__(self, message, overlaps=()):
        super().__init__(message)
        self.overlaps = tuple(overlaps)


class BudgetExceededError(UnfoldError):
    """The split budget ran out before every piece unfolded flat.

    ``partial`` holds the nets of the pieces that did unfold.
    """

    kind = "unfoldable-with-budget"

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = tuple(partial)


@dataclass(frozen=True)
class UnfoldConfig:
    heuristic: str = "steepest-edge"
    max_attempts: int = 16
    max_splits: int = 3
    overlap_eps: float = 1e-9
    placement_tol: float = 1e-9

    def __post_init__(self):
        if self.heuristic not in HEURISTICS:
            raise ValueError("unknown heuristic %r, expected one of %s"
                             % (self.heuristic, ", ".join(HEURISTICS)))
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if self.max_splits < 0:
            raise ValueError("max_splits must not be negative")
        if self.overlap_eps <= 0 or self.placement_tol <= 0:
            raise ValueError("tolerances must be positive")


# ----------------------------------------------------------------------
# cut trees

@dataclass(frozen=True)
class CutTree:
    """Complementary spanning trees: cut edges over vertices, fold edges
    over faces.  ``parent`` maps each non-root face to (parent face, shared
    edge index)."""

    mesh: Mesh
    heuristic: str
    root_face: int
    cut_edges: frozenset
    fold_edges: frozenset
    parent: dict
    order: tuple  # faces in placement order, root first

    def children(self, face):
        return [f for f in self.order if self.parent.get(f, (None,))[0] == face]


def build_cut_tree(mesh, heuristic, rng=None, max_attempts=16):
    """Cut tree via the requested heuristic.

    The two randomized heuristics redraw their direction on ties or extra
    local maxima up to ``max_attempts`` times; ``bfs-largest-face`` is
    deterministic and ignores the rng.
    """
    if heuristic == "bfs-largest-face":
        return _tree_from_fold_edges(mesh, heuristic, *_bfs_fold_edges(mesh))
    if rng is None:
        rng = np.random.default_rng(0)
    last = None
    for _ in range(max_attempts):
        c = rng.normal(size=3)
        norm = np.linalg.norm(c)
        if norm < 1e-12:
            continue
        heights = mesh.vertices @ (c / norm)
        try:
            if heuristic == "steepest-edge":
                cut = _steepest_cut_edges(mesh, heights)
            elif heuristic == "greatest-increase":
                cut = _greatest_increase_cut_edges(mesh, heights)
            else:
                raise ValueError("unknown heuristic %r" % heuristic)
        except _Degenerate as exc:
            last = exc
            continue
        tree = _tree_from_cut_edges(mesh, heuristic, cut)
        if tree is not None:
            return tree
        last = _Degenerate("cut edges do not complement a fold tree")
    raise DegenerateDirectionError(
        "%s: no usable direction in %d attempts (%s)"
        % (heuristic, max_attempts, last))


class _Degenerate(Exception):
    pass


def _boundary_data(mesh):
    boundary_edges = [e for e in mesh.edges if len(e.faces) == 1]
    boundary_vertices = {v for e in boundary_edges for v in (e.u, e.v)}
    return boundary_edges, boundary_vertices


def _vertex_neighbors(mesh, v):
    out = []
    for e in mesh.edges:
        if e.u == v:
            out.append((e.v, e))
        elif e.v == v:
            out.append((e.u, e))
    return out


def _steepest_cut_edges(mesh, heights):
    """Each vertex (except the top, or except boundary vertices on open
    meshes) cuts its steepest ascending edge."""
    tol = 1e-12 * max(1.0, float(np.abs(heights).max()))
    _, boundary_vertices = _boundary_data(mesh)
    if mesh.is_open:
        choosers = [v for v in range(len(mesh.vertices))
                    if v not in boundary_vertices]
    else:
        maxima = []
        for v in range(len(mesh.vertices)):
            hs = [heights[u] for u, _ in _vertex_neighbors(mesh, v)]
            if all(heights[v] >= h - tol for h in hs):
                maxima.append(v)
        if len(maxima) != 1:
            raise _Degenerate("%d local maxima" % len(maxima))
        choosers = [v for v in range(len(mesh.vertices)) if v != maxima[0]]

    cut = set()
    for v in choosers:
        slopes = []
        for u, e in _vertex_neighbors(mesh, v):
            length = np.linalg.norm(mesh.vertices[u] - mesh.vertices[v])
            slopes.append(((heights[u] - heights[v]) / length, e))
        best_slope, best = max(slopes, key=lambda se: se[0])
        if sum(1 for s, _ in slopes if s > best_slope - tol) > 1:
            raise _Degenerate("tied ascent at vertex %d" % v)
        cut.add(best.index)
    return cut


def _greatest_increase_cut_edges(mesh, heights):
    """Vertex spanning tree where each vertex attaches to the tree through
    its incident edge of greatest height increase.

    Vertices join highest-first, which keeps every choice unique for a
    generic direction; open meshes start from all boundary vertices at
    once, closed meshes from the lowest vertex.
    """
    tol = 1e-12 * max(1.0, float(np.abs(heights).max()))
    _, boundary_vertices = _boundary_data(mesh)
    if mesh.is_open:
        tree = set(boundary_vertices)
    else:
        order = np.argsort(heights)
        if len(order) > 1 and heights[order[1]] - heights[order[0]] <= tol:
            raise _Degenerate("tied minimum")
        tree = {int(order[0])}

    neighbors = {v: _vertex_neighbors(mesh, v)
                 for v in range(len(mesh.vertices))}
    cut = set()
    todo = len(mesh.vertices) - len(tree)
    for _ in range(todo):
        frontier = [x for x in range(len(mesh.vertices)) if x not in tree
                    and any(u in tree for u, _ in neighbors[x])]
        if not frontier:
            raise _Degenerate("vertex graph not connected")
        top = max(heights[x] for x in frontier)
        highest = [x for x in frontier if heights[x] > top - tol]
        if len(highest) > 1:
            raise _Degenerate("tied frontier height")
        x = highest[0]
        links = [(heights[x] - heights[u], e)
                 for u, e in neighbors[x] if u in tree]
        best_gain, best_edge = max(links, key=lambda ge: ge[0])
        if sum(1 for g, _ in links if g > best_gain - tol) > 1:
            raise _Degenerate("tied attachment gain")
        cut.add(best_edge.index)
        tree.add(x)
    return cut


def _bfs_fold_edges(mesh):
    """Fold tree by breadth-first dual traversal from the largest face."""
    areas = [mesh.face_area(f) for f in range(len(mesh.faces))]
    top = max(areas)
    root = min(f for f in range(len(mesh.faces))
               if areas[f] >= top - 1e-9 * max(top, 1e-30))

    fold = set()
    parent = {}
    seen = {root}
    queue = [root]
    order = [root]
    while queue:
        f = queue.pop(0)
        neighbors = []
        for a, b in face_edges(mesh.faces[f]):
            e = mesh.edges[mesh.edge_index(a, b)]
            if len(e.faces) != 2:
                continue
            g = e.faces[0] if e.faces[1] == f else e.faces[1]
            neighbors.append((g, e.index))
        for g, ei in sorted(neighbors):
            if g not in seen:
                seen.add(g)
                fold.add(ei)
                parent[g] = (f, ei)
                order.append(g)
                queue.append(g)
    if len(seen) != len(mesh.faces):
        raise UnfoldError("face adjacency graph is not connected")
    return root, fold, parent, order


def _tree_from_fold_edges(mesh, heuristic, root, fold, parent, order):
    interior = {e.index for e in mesh.edges if len(e.faces) == 2}
    cut = frozenset(interior - fold)
    tree = CutTree(mesh=mesh, heuristic=heuristic, root_face=root,
                   cut_edges=cut, fold_edges=frozenset(fold),
                   parent=parent, order=tuple(order))
    _check_tree(tree)
    return tree


def _tree_from_cut_edges(mesh, heuristic, cut):
    """Fold tree as the complement of the cut set, or None if that is not
    a spanning tree of the faces."""
    interior = {e.index for e in mesh.edges if len(e.faces) == 2}
    fold = interior - set(cut)
    if len(fold) != len(mesh.faces) - 1:
        return None

    adj = {}
    for ei in fold:
        f, g = mesh.edges[ei].faces
        adj.setdefault(f, []).append((g, ei))
        adj.setdefault(g, []).append((f, ei))
    root = 0
    parent = {}
    seen = {root}
    order = [root]
    queue = [root]
    while queue:
        f = queue.pop(0)
        for g, ei in sorted(adj.get(f, [])):
            if g not in seen:
                seen.add(g)
                parent[g] = (f, ei)
                order.append(g)
                queue.append(g)
    if len(seen) != len(mesh.faces):
        return None
    return _tree_from_fold_edges(mesh, heuristic, root, fold, parent, order)


def _check_tree(tree):
    mesh = tree.mesh
    if len(tree.fold_edges) != len(mesh.faces) - 1:
        raise UnfoldError("fold tree has %d edges for %d faces"
                          % (len(tree.fold_edges), len(mesh.faces)))
    if not mesh.is_open:
        if len(tree.cut_edges) != len(mesh.vertices) - 1:
            raise UnfoldError("cut tree has %d edges for %d vertices"
                              % (len(tree.cut_edges), len(mesh.vertices)))
        # the cut edges must connect every vertex without cycles
        parent = list(range(len(mesh.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ei in tree.cut_edges:
            e = mesh.edges[ei]
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                raise UnfoldError("cut edges contain a cycle")
            parent[ru] = rv
        roots = {find(v) for v in range(len(mesh.vertices))}
        if len(roots) != 1:
            raise UnfoldError("cut edges do not span the vertices")


# ----------------------------------------------------------------------
# flat placement

@dataclass(frozen=True)
class NetVertex:
    """One voice of a mesh vertex in the plane.

    A mesh vertex on the cut tree appears several times around the net
    outline; each flat copy is its own net vertex.  ``corners`` lists the
    (face, corner index) pairs that coincide here.
    """

    index: int
    mesh_vertex: int
    position: tuple
    corners: tuple


@dataclass(frozen=True)
class Crease:
    """Fold edge as drawn in the net, directed as the parent traverses it."""

    mesh_edge: int
    parent_face: int
    child_face: int
    net_a: int
    net_b: int


@dataclass(frozen=True)
class BoundarySegment:
    """One flat copy of a cut (or mesh boundary) edge on the net outline."""

    mesh_edge: int
    face: int
    net_a: int
    net_b: int


class Net:
    """A flat single-piece layout of a mesh."""

    def __init__(self, mesh, tree, placements, vertices, corner_to_vertex,
                 creases, boundary):
        self.mesh = mesh
        self.tree = tree
        self.placements = placements
        self.vertices = tuple(vertices)
        self.corner_to_vertex = corner_to_vertex
        self.creases = tuple(creases)
        self.boundary = tuple(boundary)

    def vertex_at(self, face, corner):
        return self.vertices[self.corner_to_vertex[(face, corner)]]

    def copies_of(self, mesh_vertex):
        return [v for v in self.vertices if v.mesh_vertex == mesh_vertex]

    def bbox(self):
        pts = np.array([v.position for v in self.vertices])
        return pts.min(axis=0), pts.max(axis=0)

    def bbox_area(self):
        lo, hi = self.bbox()
        return float((hi[0] - lo[0]) * (hi[1] - lo[1]))

    def boundary_neighbors(self):
        """net vertex index -> sorted neighbor indices along the outline."""
        adj = {v.index: set() for v in self.vertices}
        for seg in self.boundary:
            adj[seg.net_a].add(seg.net_b)
            adj[seg.net_b].add(seg.net_a)
        return {k: sorted(vs) for k, vs in adj.items()}

    def mean_edge_length(self):
        total = 0.0
        count = 0
        for segs in (self.creases, self.boundary):
            for seg in segs:
                a = np.array(self.vertices[seg.net_a].position)
                b = np.array(self.vertices[seg.net_b].position)
                total += float(np.linalg.norm(a - b))
                count += 1
        return total / count if count else 0.0

    def __repr__(self):
        return "Net(%r, faces=%d, vertices=%d)" % (
            self.mesh.label, len(self.placements), len(self.vertices))


def _face_frame(mesh, f):
    """2D coordinates of a face in its own plane, x along the first edge,
    counter-clockwise as seen from outside."""
    pts = mesh.face_points(f)
    n = mesh.face_normal(f)
    e1 = pts[1] - pts[0]
    norm = np.linalg.norm(e1)
    if norm <= 0:
        raise DegenerateGeometryError("face %d has a zero-length edge" % f)
    e1 = e1 / norm
    e2 = np.cross(n, e1)
    rel = pts - pts[0]
    return np.stack([rel @ e1, rel @ e2], axis=1)


def _rigid_from_two_points(src_a, src_b, dst_a, dst_b):
    """Orientation-preserving planar isometry taking src_a/b to dst_a/b."""
    sv = src_b - src_a
    dv = dst_b - dst_a
    ang = math.atan2(dv[1], dv[0]) - math.atan2(sv[1], sv[0])
    c, s = math.cos(ang), math.sin(ang)
    rot = np.array([[c, -s], [s, c]])
    trans = dst_a - rot @ src_a
    return rot, trans


def place_faces(mesh, tree, tol=1e-9):
    """Lay the faces flat along the fold tree.

    The root face keeps its own frame: first vertex at the origin, first
    edge along +x.  Every other face is pinned to its parent through the
    two shared edge endpoints; since the parent traverses the shared edge
    one way and the child the other, the child lands on the far side
    automatically.  Chained placements are checked against the mesh edge
    lengths and rejected as numeric instability past ``tol`` x scale.
    """
    scale = max(mesh.bbox_diagonal(), 1e-30)
    placements = {}
    for f in tree.order:
        local = _face_frame(mesh, f)
        if f == tree.root_face:
            placements[f] = local
            continue
        pf, ei = tree.parent[f]
        edge = mesh.edges[ei]
        a, b = edge.u, edge.v
        if not _face_has_directed(mesh.faces[pf], a, b):
            a, b = b, a
        face_p = mesh.faces[pf]
        face_c = mesh.faces[f]
        pa = placements[pf][face_p.index(a)]
        pb = placements[pf][face_p.index(b)]
        ca = local[face_c.index(a)]
        cb = local[face_c.index(b)]
        rot, trans = _rigid_from_two_points(ca, cb, pa, pb)
        placed = local @ rot.T + trans
        err = np.linalg.norm(placed[face_c.index(b)] - pb)
        if err > tol * scale:
            raise NumericInstabilityError(
                "face %d drifted %.3g from its crease" % (f, err))
        placements[f] = placed

    # weld corners across each crease so each flat copy of a mesh vertex
    # becomes exactly one net vertex
    corner_ids = {}
    corners = []
    for f in tree.order:
        for ci in range(len(mesh.faces[f])):
            corner_ids[(f, ci)] = len(corners)
            corners.append((f, ci))
    parent = list(range(len(corners)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for f in tree.order:
        if f == tree.root_face:
            continue
        pf, ei = tree.parent[f]
        edge = mesh.edges[ei]
        for mv in (edge.u, edge.v):
            union(corner_ids[(pf, mesh.faces[pf].index(mv))],
                  corner_ids[(f, mesh.faces[f].index(mv))])

    groups = {}
    for cid in range(len(corners)):
        groups.setdefault(find(cid), []).append(cid)

    vertices = []
    corner_to_vertex = {}
    for root_cid in sorted(groups):
        members = groups[root_cid]
        f0, c0 = corners[members[0]]
        pos = placements[f0][c0]
        for cid in members[1:]:
            f, c = corners[cid]
            if np.linalg.norm(placements[f][c] - pos) > tol * scale:
                raise NumericInstabilityError(
                    "corners of mesh vertex %d split apart in the plane"
                    % mesh.faces[f0][c0])
        nv = NetVertex(index=len(vertices),
                       mesh_vertex=mesh.faces[f0][c0],
                       position=(float(pos[0]), float(pos[1])),
                       corners=tuple(corners[cid] for cid in members))
        for cid in members:
            corner_to_vertex[corners[cid]] = nv.index
        vertices.append(nv)

    creases = []
    for f in tree.order:
        if f == tree.root_face:
            continue
        pf, ei = tree.parent[f]
        edge = mesh.edges[ei]
        a, b = edge.u, edge.v
        if not _face_has_directed(mesh.faces[pf], a, b):
            a, b = b, a
        creases.append(Crease(
            mesh_edge=ei, parent_face=pf, child_face=f,
            net_a=corner_to_vertex[(pf, mesh.faces[pf].index(a))],
            net_b=corner_to_vertex[(pf, mesh.faces[pf].index(b))]))

    boundary = []
    for f in tree.order:
        face = mesh.faces[f]
        for ci, (a, b) in enumerate(face_edges(face)):
            ei = mesh.edge_index(a, b)
            if ei in tree.fold_edges:
                continue
            boundary.append(BoundarySegment(
                mesh_edge=ei, face=f,
                net_a=corner_to_vertex[(f, ci)],
                net_b=corner_to_vertex[(f, (ci + 1) % len(face))]))

    return Net(mesh, tree, placements, vertices, corner_to_vertex,
               creases, boundary)


def _face_has_directed(face, a, b):
    for x, y in face_edges(face):
        if (x, y) == (a, b):
            return True
    return False


# ----------------------------------------------------------------------
# overlap detection

@dataclass(frozen=True)
class Overlap:
    face_a: int
    face_b: int
    area: float


def detect_overlaps(net, eps=1e-9):
    """Face pairs of the net with intersection area above eps x bbox area.

    Faces are fan-triangulated and clipped pairwise; sharing a crease or a
    point is fine since that carries no area.  Axis-aligned bounding boxes
    prune the quadratic pair loop.
    """
    floor = eps * max(net.bbox_area(), 1e-30)
    faces = sorted(net.placements)
    boxes = {}
    tris = {}
    for f in faces:
        pts = net.placements[f]
        boxes[f] = (pts.min(axis=0), pts.max(axis=0))
        tris[f] = [np.array([pts[0], pts[i], pts[i + 1]])
                   for i in range(1, len(pts) - 1)]

    overlaps = []
    for i, f in enumerate(faces):
        lo_f, hi_f = boxes[f]
        for g in faces[i + 1:]:
            lo_g, hi_g = boxes[g]
            if (hi_f[0] < lo_g[0] or hi_g[0] < lo_f[0]
                    or hi_f[1] < lo_g[1] or hi_g[1] < lo_f[1]):
                continue
            area = 0.0
            for ta in tris[f]:
                for tb in tris[g]:
                    area += _convex_clip_area(ta, tb)
            if area > floor:
                overlaps.append(Overlap(face_a=f, face_b=g, area=float(area)))
    return overlaps


def _convex_clip_area(subject, clip):
    """Area of the intersection of two convex CCW polygons
    (Sutherland-Hodgman)."""
    poly = [tuple(p) for p in subject]
    for i in range(len(clip)):
        a = clip[i]
        b = clip[(i + 1) % len(clip)]
        ex, ey = b[0] - a[0], b[1] - a[1]
        inside = []
        for j in range(len(poly)):
            p = poly[j]
            q = poly[(j + 1) % len(poly)]
            dp = ex * (p[1] - a[1]) - ey * (p[0] - a[0])
            dq = ex * (q[1] - a[1]) - ey * (q[0] - a[0])
            if dp >= 0:
                inside.append(p)
            if (dp >= 0) != (dq >= 0):
                t = dp / (dp - dq)
                inside.append((p[0] + t * (q[0] - p[0]),
                               p[1] + t * (q[1] - p[1])))
        poly = inside
        if not poly:
            return 0.0
    area = 0.0
    for j in range(len(poly)):
        p = poly[j]
        q = poly[(j + 1) % len(poly)]
        area += p[0] * q[1] - q[0] * p[1]
    return abs(area) / 2.0


# ----------------------------------------------------------------------
# splitting and the full unfold

@dataclass(frozen=True)
class UnfoldResult:
    mesh: Mesh
    nets: tuple
    split_count: int
    heuristic: str

    @property
    def single_piece(self):
        return len(self.nets) == 1


def unfold_single(mesh, config, rng):
    """One flat net for the whole mesh, or OverlapError after all attempts.

    Randomized heuristics get ``max_attempts`` fresh layouts before giving
    up; the deterministic one would only repeat itself, so it gets one.
    """
    attempts = 1 if config.heuristic == "bfs-largest-face" \
        else config.max_attempts
    last = None
    for _ in range(attempts):
        tree = build_cut_tree(mesh, config.heuristic, rng,
                              max_attempts=config.max_attempts)
        net = place_faces(mesh, tree, tol=config.placement_tol)
        overlaps = detect_overlaps(net, eps=config.overlap_eps)
        if not overlaps:
            return net
        last = overlaps
    raise OverlapError(
        "%s: %d overlapping face pairs persisted through %d attempts on %r"
        % (config.heuristic, len(last), attempts, mesh.label),
        overlaps=last)


def split_mesh(mesh, rng, attempts=16):
    """Split along a plane through the area-weighted surface centroid.

    Candidate normals are the principal axes of the vertex cloud followed
    by random directions; the first plane giving two non-empty connected
    halves wins.
    """
    origin = mesh.surface_centroid()
    centered = mesh.vertices - mesh.vertices.mean(axis=0)
    cov = centered.T @ centered
    eigvals, eigvecs = np.linalg.eigh(cov)
    candidates = [eigvecs[:, i] for i in np.argsort(eigvals)[::-1]]
    for _ in range(attempts):
        c = rng.normal(size=3)
        norm = np.linalg.norm(c)
        if norm > 1e-12:
            candidates.append(c / norm)

    for normal in candidates:
        side_a = []
        side_b = []
        for f in range(len(mesh.faces)):
            d = float(np.dot(mesh.face_centroid(f) - origin, normal))
            (side_a if d > 0 else side_b).append(f)
        if not side_a or not side_b:
            continue
        half_a = mesh.submesh(side_a)
        half_b = mesh.submesh(side_b)
        if len(half_a.face_components()) == 1 \
                and len(half_b.face_components()) == 1:
            return half_a, half_b
    raise UnfoldError("no splitting plane produced two connected halves of %r"
                      % mesh.label)


def unfold_with_fallback(mesh, config=None, rng=None):
    """Unfold the mesh, splitting into pieces when a net self-intersects.

    Splits recurse depth-first within ``config.max_splits``; running out of
    budget raises BudgetExceededError carrying the nets finished so far.
    """
    if config is None:
        config = UnfoldConfig()
    if rng is None:
        rng = np.random.default_rng(0)

    nets = []
    split_count = 0

    def run(piece, depth):
        nonlocal split_count
        try:
            nets.append(unfold_single(piece, config, rng))
            return
        except (OverlapError, DegenerateDirectionError) as exc:
            if depth >= config.max_splits:
                raise BudgetExceededError(
                    "piece %r still overlaps after %d splits: %s"
                    % (piece.label, split_count, exc),
                    partial=nets)
        half_a, half_b = split_mesh(piece, rng)
        split_count += 1
        run(half_a, depth + 1)
        run(half_b, depth + 1)

    run(mesh, 0)
    return UnfoldResult(mesh=mesh, nets=tuple(nets),
                        split_count=split_count, heuristic=config.heuristic)
