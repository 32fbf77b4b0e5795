"""Reference solids: Platonic, Archimedean, Catalan, prisms and antiprisms.

Everything is constructed from first principles (coordinate orbits, edge
truncation, polar duality, convex hulls) and structurally checked, so a bad
recipe fails loudly at build time instead of producing a quietly wrong mesh.
Edge lengths are normalized to 1 where the solid has uniform edges.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

from .mesh import Mesh, face_edges, newell_normal, normalize_orientation, validate_manifold

PHI = (1.0 + math.sqrt(5.0)) / 2.0


class SolidConstructionError(RuntimeError):
    """A generator produced something other than the intended solid."""


# ----------------------------------------------------------------------
# convex hull to mesh

def convex_mesh(points, label="", merge_tol=1e-9):
    """Mesh of the convex hull, coplanar facets merged into polygons."""
    pts = _dedup(np.asarray(points, dtype=float))
    hull = ConvexHull(pts)
    if len(hull.vertices) != len(pts):
        raise SolidConstructionError(
            "%s: %d of %d points are interior" %
            (label, len(pts) - len(hull.vertices), len(pts)))
    scale = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    tris = []
    for simplex, eq in zip(hull.simplices, hull.equations):
        i, j, k = simplex
        n = eq[:3]
        if np.dot(np.cross(pts[j] - pts[i], pts[k] - pts[i]), n) < 0:
            j, k = k, j
        tris.append(((i, j, k), n, eq[3]))

    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edge_owner = {}
    for ti, (tri, _, _) in enumerate(tris):
        for a, b in face_edges(tri):
            key = (a, b) if a < b else (b, a)
            if key in edge_owner:
                tj = edge_owner[key]
                ni, oi = tris[ti][1], tris[ti][2]
                nj, oj = tris[tj][1], tris[tj][2]
                if np.dot(ni, nj) > 1 - merge_tol and abs(oi - oj) <= merge_tol * max(scale, 1):
                    parent[find(ti)] = find(tj)
            else:
                edge_owner[key] = ti

    groups = {}
    for ti in range(len(tris)):
        groups.setdefault(find(ti), []).append(ti)

    faces = []
    for members in groups.values():
        directed = set()
        for ti in members:
            for a, b in face_edges(tris[ti][0]):
                if (b, a) in directed:
                    directed.remove((b, a))
                else:
                    directed.add((a, b))
        succ = dict(directed)
        if len(succ) != len(directed):
            raise SolidConstructionError("%s: non-simple merged face" % label)
        start = min(succ)
        cycle = [start]
        while True:
            nxt = succ[cycle[-1]]
            if nxt == start:
                break
            cycle.append(nxt)
            if len(cycle) > len(succ):
                raise SolidConstructionError("%s: open merged face" % label)
        faces.append(tuple(cycle))

    faces.sort(key=lambda f: _canonical(f))
    faces = [_rotate_min_first(f) for f in faces]
    return normalize_orientation(Mesh(pts, faces, label=label))


def _dedup(pts, tol=1e-9):
    kept = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= tol for q in kept):
            kept.append(p)
    return np.array(kept)


def _canonical(face):
    return tuple(sorted(face))


def _rotate_min_first(face):
    k = face.index(min(face))
    return tuple(face[k:] + face[:k])


# ----------------------------------------------------------------------
# structural checks

def edge_lengths(mesh):
    return np.array([np.linalg.norm(mesh.vertices[e.u] - mesh.vertices[e.v])
                     for e in mesh.edges])


def face_census(mesh):
    """Histogram {face degree: count}."""
    census = {}
    for f in mesh.faces:
        census[len(f)] = census.get(len(f), 0) + 1
    return census


def check_solid(mesh, unit_edges=True, regular_faces=True, census=None,
                tol=1e-7):
    """Raise unless the mesh is the intended closed well-formed solid."""
    report = validate_manifold(mesh)
    if not report.accepted:
        raise SolidConstructionError(
            "%s: %s" % (mesh.label, report.to_json()))
    if mesh.signed_volume() <= 0:
        raise SolidConstructionError("%s: inward orientation" % mesh.label)
    lengths = edge_lengths(mesh)
    if unit_edges and (abs(lengths - 1.0) > tol).any():
        raise SolidConstructionError(
            "%s: edge lengths in [%.9f, %.9f], expected 1"
            % (mesh.label, lengths.min(), lengths.max()))
    if regular_faces:
        for fi, face in enumerate(mesh.faces):
            pts = mesh.vertices[list(face)]
            c = pts.mean(axis=0)
            radii = np.linalg.norm(pts - c, axis=1)
            if np.ptp(radii) > tol * 10:
                raise SolidConstructionError(
                    "%s: face %d is not regular" % (mesh.label, fi))
    if census is not None and face_census(mesh) != census:
        raise SolidConstructionError(
            "%s: face census %r, expected %r"
            % (mesh.label, face_census(mesh), census))
    return mesh


def rescale_unit_edges(mesh):
    lengths = edge_lengths(mesh)
    return Mesh(mesh.vertices / lengths.mean(), mesh.faces, label=mesh.label)


# ----------------------------------------------------------------------
# coordinate orbits

def _perms(vec, even_only=False):
    out = []
    for perm in itertools.permutations(range(3)):
        parity = (perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
        if even_only and not parity:
            continue
        out.append([vec[perm[0]], vec[perm[1]], vec[perm[2]]])
    return out


def sign_perms(vec, even_only=False):
    """All permutations and sign choices of a coordinate triple."""
    pts = []
    for p in _perms(vec, even_only):
        for signs in itertools.product(*[[1, -1] if x != 0 else [1]
                                         for x in p]):
            pts.append([s * x for s, x in zip(signs, p)])
    return pts


def _closure(generators, order):
    """Close a set of rotation matrices under multiplication."""
    mats = [np.eye(3)]
    frontier = [np.eye(3)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                c = g @ m
                if not any(np.abs(c - k).max() < 1e-9 for k in mats):
                    mats.append(c)
                    nxt.append(c)
        frontier = nxt
        if len(mats) > order:
            break
    if len(mats) != order:
        raise SolidConstructionError(
            "rotation group closed at %d elements, expected %d"
            % (len(mats), order))
    return mats


def _axis_rotation(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    c, s = math.cos(angle), math.sin(angle)
    cc = 1 - c
    return np.array([
        [c + x * x * cc, x * y * cc - z * s, x * z * cc + y * s],
        [y * x * cc + z * s, c + y * y * cc, y * z * cc - x * s],
        [z * x * cc - y * s, z * y * cc + x * s, c + z * z * cc]])


@lru_cache(maxsize=None)
def octahedral_rotations():
    return _closure([_axis_rotation((0, 0, 1), math.pi / 2),
                     _axis_rotation((1, 1, 1), 2 * math.pi / 3)], 24)


@lru_cache(maxsize=None)
def icosahedral_rotations():
    return _closure([_axis_rotation((0, 0, 1), math.pi),
                     _axis_rotation((0, 1, PHI), 2 * math.pi / 5)], 60)


# ----------------------------------------------------------------------
# Platonic solids

@lru_cache(maxsize=None)
def tetrahedron():
    s3 = math.sqrt(3.0)
    verts = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.5, s3 / 2, 0.0),
             (0.5, s3 / 6, math.sqrt(2.0 / 3.0))]
    faces = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (2, 0, 3)]
    mesh = Mesh(np.array(verts) - np.mean(verts, axis=0), faces,
                label="tetrahedron")
    return check_solid(mesh, census={3: 4})


@lru_cache(maxsize=None)
def cube():
    verts = [(-.5, -.5, -.5), (.5, -.5, -.5), (.5, .5, -.5), (-.5, .5, -.5),
             (-.5, -.5, .5), (.5, -.5, .5), (.5, .5, .5), (-.5, .5, .5)]
    faces = [(0, 3, 2, 1), (4, 5, 6, 7),
             (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
    return check_solid(Mesh(verts, faces, label="cube"), census={4: 6})


@lru_cache(maxsize=None)
def octahedron():
    pts = np.array(sign_perms((1, 0, 0))) / math.sqrt(2.0)
    return check_solid(convex_mesh(pts, "octahedron"), census={3: 8})


@lru_cache(maxsize=None)
def dodecahedron():
    pts = sign_perms((1, 1, 1))
    pts += sign_perms((0, 1 / PHI, PHI), even_only=True)
    mesh = convex_mesh(np.array(pts) * (PHI / 2.0), "dodecahedron")
    return check_solid(mesh, census={5: 12})


@lru_cache(maxsize=None)
def icosahedron():
    pts = np.array(sign_perms((0, 1, PHI), even_only=True)) / 2.0
    return check_solid(convex_mesh(pts, "icosahedron"), census={3: 20})


def platonic_solids():
    return [tetrahedron(), cube(), octahedron(), dodecahedron(), icosahedron()]


# ----------------------------------------------------------------------
# Archimedean solids

def _truncate_regular(mesh, label, census):
    """Truncate a Platonic solid so all faces come out regular."""
    p = len(mesh.faces[0])
    theta = math.pi * (p - 2) / p
    t = 1.0 / (2.0 + 2.0 * math.sin(theta / 2.0))
    pts = []
    for face in mesh.faces:
        for a, b in face_edges(face):
            pts.append(mesh.vertices[a] + t * (mesh.vertices[b] - mesh.vertices[a]))
    out = rescale_unit_edges(convex_mesh(pts, label))
    return check_solid(convex_mesh(out.vertices, label), census=census)


def _midpoints(mesh, label, census):
    pts = [(mesh.vertices[e.u] + mesh.vertices[e.v]) / 2.0 for e in mesh.edges]
    out = rescale_unit_edges(convex_mesh(pts, label))
    return check_solid(convex_mesh(out.vertices, label), census=census)


@lru_cache(maxsize=None)
def truncated_tetrahedron():
    return _truncate_regular(tetrahedron(), "truncated tetrahedron",
                             {3: 4, 6: 4})


@lru_cache(maxsize=None)
def truncated_cube():
    return _truncate_regular(cube(), "truncated cube", {3: 8, 8: 6})


@lru_cache(maxsize=None)
def truncated_octahedron():
    return _truncate_regular(octahedron(), "truncated octahedron",
                             {4: 6, 6: 8})


@lru_cache(maxsize=None)
def truncated_dodecahedron():
    return _truncate_regular(dodecahedron(), "truncated dodecahedron",
                             {3: 20, 10: 12})


@lru_cache(maxsize=None)
def truncated_icosahedron():
    return _truncate_regular(icosahedron(), "truncated icosahedron",
                             {5: 12, 6: 20})


@lru_cache(maxsize=None)
def cuboctahedron():
    return _midpoints(cube(), "cuboctahedron", {3: 8, 4: 6})


@lru_cache(maxsize=None)
def icosidodecahedron():
    return _midpoints(icosahedron(), "icosidodecahedron", {3: 20, 5: 12})


def _coordinate_solid(pts, label, census):
    out = rescale_unit_edges(convex_mesh(np.array(pts, dtype=float), label))
    return check_solid(convex_mesh(out.vertices, label), census=census)


@lru_cache(maxsize=None)
def rhombicuboctahedron():
    return _coordinate_solid(sign_perms((1, 1, 1 + math.sqrt(2))),
                             "rhombicuboctahedron", {3: 8, 4: 18})


@lru_cache(maxsize=None)
def truncated_cuboctahedron():
    r2 = math.sqrt(2)
    return _coordinate_solid(sign_perms((1, 1 + r2, 1 + 2 * r2)),
                             "truncated cuboctahedron", {4: 12, 6: 8, 8: 6})


@lru_cache(maxsize=None)
def rhombicosidodecahedron():
    pts = sign_perms((1, 1, PHI ** 3), even_only=True)
    pts += sign_perms((PHI ** 2, PHI, 2 * PHI), even_only=True)
    pts += sign_perms((2 + PHI, 0, PHI ** 2), even_only=True)
    return _coordinate_solid(pts, "rhombicosidodecahedron",
                             {3: 20, 4: 30, 5: 12})


@lru_cache(maxsize=None)
def truncated_icosidodecahedron():
    f = PHI
    fams = [(1 / f, 1 / f, 3 + f), (2 / f, f, 1 + 2 * f),
            (1 / f, f * f, 3 * f - 1), (2 * f - 1, 2, 2 + f), (f, 3, 2 * f)]
    pts = []
    for fam in fams:
        pts += sign_perms(fam, even_only=True)
    return _coordinate_solid(pts, "truncated icosidodecahedron",
                             {4: 30, 6: 20, 10: 12})


def _chiral_orbit_solid(group, seed, label, census):
    """Equal-edge solid whose vertices are one orbit of a rotation group.

    The seed direction is polished so all hull edges match in length, then
    the face census confirms we landed on the intended solid rather than an
    achiral orbit that also has uniform edges.
    """
    group = list(group)

    def build(direction):
        d = np.asarray(direction) / np.linalg.norm(direction)
        return np.array([m @ d for m in group])

    def true_edge_lengths(pts):
        # skip edges shared by near-coplanar facets: those are diagonals
        # of a polygon the hull triangulated, not edges of the solid
        hull = ConvexHull(pts)
        edge_normals = {}
        for si, simplex in enumerate(hull.simplices):
            for a, b in face_edges(tuple(simplex)):
                key = (a, b) if a < b else (b, a)
                edge_normals.setdefault(key, []).append(hull.equations[si][:3])
        lens = []
        for (a, b), ns in edge_normals.items():
            if len(ns) == 2 and np.dot(ns[0], ns[1]) > 1 - 1e-6:
                continue
            lens.append(np.linalg.norm(pts[a] - pts[b]))
        return np.array(lens)

    def objective(angles):
        th, ph = angles
        d = (math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph),
             math.cos(th))
        pts = _dedup(build(d), tol=1e-6)
        if len(pts) != len(group):
            return 1e6
        lens = true_edge_lengths(pts)
        return float(lens.std() / lens.mean())

    d0 = np.asarray(seed, dtype=float)
    d0 = d0 / np.linalg.norm(d0)
    a0 = np.array([math.acos(np.clip(d0[2], -1, 1)),
                   math.atan2(d0[1], d0[0])])
    if objective(a0) > 1e-12:
        res = minimize(objective, a0, method="Nelder-Mead",
                       options={"xatol": 1e-14, "fatol": 1e-30,
                                "maxiter": 4000})
        a0 = res.x
    th, ph = a0
    d = (math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph),
         math.cos(th))
    out = rescale_unit_edges(convex_mesh(build(d), label, merge_tol=1e-7))
    return check_solid(convex_mesh(out.vertices, label, merge_tol=1e-7),
                       census=census)


@lru_cache(maxsize=None)
def snub_cube():
    t = float(np.real(sorted(np.roots([1, -1, -1, -1]),
                             key=lambda r: -np.real(r))[0]))
    return _chiral_orbit_solid(octahedral_rotations(), (1.0, 1.0 / t, t),
                               "snub cube", {3: 32, 4: 6})


@lru_cache(maxsize=None)
def snub_dodecahedron():
    xi = float(np.real(sorted(np.roots([1, 0, -2, -PHI]),
                              key=lambda r: -np.real(r))[0]))
    alpha = xi - 1.0 / xi
    beta = xi * PHI + PHI ** 2 + PHI / xi
    return _chiral_orbit_solid(icosahedral_rotations(),
                               (2.0, 2 * alpha, 2 * beta),
                               "snub dodecahedron", {3: 80, 5: 12})


def archimedean_solids():
    return [truncated_tetrahedron(), cuboctahedron(), truncated_cube(),
            truncated_octahedron(), rhombicuboctahedron(),
            truncated_cuboctahedron(), snub_cube(), icosidodecahedron(),
            truncated_dodecahedron(), truncated_icosahedron(),
            rhombicosidodecahedron(), truncated_icosidodecahedron(),
            snub_dodecahedron()]


# ----------------------------------------------------------------------
# Catalan solids (polar duals of the Archimedeans)

def polar_dual(mesh, label):
    """Polar reciprocal about the circumscribed sphere center."""
    normals = []
    offsets = []
    for f in range(len(mesh.faces)):
        n = mesh.face_normal(f)
        d = float(np.dot(n, mesh.face_centroid(f)))
        if d <= 0:
            raise SolidConstructionError("%s: center outside solid" % label)
        normals.append(n)
        offsets.append(d)
    dual_vertices = np.array([n / d for n, d in zip(normals, offsets)])

    half = {}
    for fi, face in enumerate(mesh.faces):
        for a, b in face_edges(face):
            half[(a, b)] = fi

    dual_faces = []
    for v in range(len(mesh.vertices)):
        incident = mesh.vertex_faces(v)
        start = min(incident)
        cycle = [start]
        while True:
            f = cycle[-1]
            face = mesh.faces[f]
            nxt_vertex = face[(face.index(v) + 1) % len(face)]
            g = half[(nxt_vertex, v)]
            if g == start:
                break
            cycle.append(g)
            if len(cycle) > len(incident):
                raise SolidConstructionError("%s: broken fan at vertex %d"
                                             % (label, v))
        n = newell_normal(dual_vertices[cycle])
        if np.dot(n, mesh.vertices[v]) < 0:
            cycle.reverse()
        dual_faces.append(tuple(cycle))

    dual = Mesh(dual_vertices, dual_faces, label=label)
    dual = rescale_unit_edges(normalize_orientation(dual))
    return check_solid(dual, unit_edges=False, regular_faces=False)


CATALAN_RECIPES = [
    ("triakis tetrahedron", truncated_tetrahedron),
    ("rhombic dodecahedron", cuboctahedron),
    ("triakis octahedron", truncated_cube),
    ("tetrakis hexahedron", truncated_octahedron),
    ("deltoidal icositetrahedron", rhombicuboctahedron),
    ("disdyakis dodecahedron", truncated_cuboctahedron),
    ("pentagonal icositetrahedron", snub_cube),
    ("rhombic triacontahedron", icosidodecahedron),
    ("triakis icosahedron", truncated_dodecahedron),
    ("pentakis dodecahedron", truncated_icosahedron),
    ("deltoidal hexecontahedron", rhombicosidodecahedron),
    ("pentagonal hexecontahedron", snub_dodecahedron),
]


def catalan_solids():
    return [polar_dual(build(), name) for name, build in CATALAN_RECIPES]


# ----------------------------------------------------------------------
# prisms and antiprisms

def ring(n, radius, z, phase=0.0):
    ang = phase + 2 * math.pi * np.arange(n) / n
    return np.stack([radius * np.cos(ang), radius * np.sin(ang),
                     np.full(n, float(z))], axis=1)


def polygon_circumradius(n):
    return 1.0 / (2.0 * math.sin(math.pi / n))


def antiprism_height(n):
    r = polygon_circumradius(n)
    h2 = 1.0 - 4.0 * r * r * math.sin(math.pi / (2 * n)) ** 2
    if h2 <= 0:
        raise SolidConstructionError("antiprism with %d-gon degenerates" % n)
    return math.sqrt(h2)


def cupola_height(n):
    """Height of the regular cupola joining an n-gon to a 2n-gon."""
    r2 = polygon_circumradius(2 * n)
    rn = polygon_circumradius(n)
    h2 = 1.0 - (r2 * r2 + rn * rn - 2 * r2 * rn * math.cos(math.pi / (2 * n)))
    if h2 <= 0:
        raise SolidConstructionError("cupola on a %d-gon degenerates" % n)
    return math.sqrt(h2)


@lru_cache(maxsize=None)
def prism(n):
    r = polygon_circumradius(n)
    pts = np.vstack([ring(n, r, -0.5), ring(n, r, 0.5)])
    label = "%d-gonal prism" % n
    return check_solid(convex_mesh(pts, label), census={4: n, n: 2}
                       if n != 4 else {4: 6})


@lru_cache(maxsize=None)
def antiprism(n):
    r = polygon_circumradius(n)
    h = antiprism_height(n)
    pts = np.vstack([ring(n, r, -h / 2),
                     ring(n, r, h / 2, phase=math.pi / n)])
    label = "%d-gonal antiprism" % n
    census = {3: 2 * n, n: 2} if n != 3 else {3: 8}
    return check_solid(convex_mesh(pts, label), census=census)
