"""Johnson solids J1-J83 (except J64) from ring stacks and cap surgery.

The stack family (J1-J48) is assembled from horizontal rings: a cap
(pyramid, cupola or rotunda) on top, an optional prism or antiprism belt,
and either a base face or a mirrored cap below.  The rest are surgeries on
solids we already have: pyramids or cupolas glued onto faces, vertex caps
cut away, pentagonal caps rotated in place.  Every result goes through the
same structural validation as the uniform solids, so a wrong height or
phase fails the build instead of shipping a near-miss.

J64 and the elementary solids J84-J92 have no construction here.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from .solids import (
    SolidConstructionError,
    antiprism_height,
    check_solid,
    convex_mesh,
    cupola_height,
    dodecahedron,
    face_census,
    icosahedron,
    icosidodecahedron,
    polygon_circumradius,
    prism,
    rhombicosidodecahedron,
    ring,
    truncated_cube,
    truncated_dodecahedron,
    truncated_tetrahedron,
    _axis_rotation,
)


def pyramid_height(n):
    r = polygon_circumradius(n)
    h2 = 1.0 - r * r
    if h2 <= 0:
        raise SolidConstructionError("pyramid on a %d-gon degenerates" % n)
    return math.sqrt(h2)


# ----------------------------------------------------------------------
# rotunda cap, measured once from an icosidodecahedron slice

@lru_cache(maxsize=None)
def _rotunda_rings():
    """((r, z, phase) for the middle and top pentagon rings of a rotunda
    whose decagonal base ring sits at z=0 with phase 0)."""
    icd = icosidodecahedron()
    axis = np.array([0.0, 1.0, (1 + math.sqrt(5)) / 2])
    axis /= np.linalg.norm(axis)
    # rotate the five-fold axis onto +z
    zhat = np.array([0.0, 0.0, 1.0])
    v = np.cross(axis, zhat)
    ang = math.atan2(np.linalg.norm(v), float(np.dot(axis, zhat)))
    rot = _axis_rotation(v, ang)
    pts = icd.vertices @ rot.T
    upper = pts[pts[:, 2] > -1e-9]
    if len(upper) != 20:
        raise SolidConstructionError("rotunda slice kept %d vertices" % len(upper))

    base = upper[np.abs(upper[:, 2]) < 1e-9]
    theta0 = min(math.atan2(p[1], p[0]) % (2 * math.pi) for p in base)
    spin = _axis_rotation(zhat, -theta0)
    upper = upper @ spin.T

    rings = {}
    for p in upper:
        z = round(float(p[2]), 9)
        rings.setdefault(z, []).append(p)
    levels = sorted(rings)
    if len(levels) != 3 or [len(rings[z]) for z in levels] != [10, 5, 5]:
        raise SolidConstructionError("unexpected rotunda ring structure")

    out = []
    for z in levels[1:]:
        grp = np.array(rings[z])
        r = float(np.linalg.norm(grp[0, :2]))
        phases = sorted(math.atan2(p[1], p[0]) % (2 * math.pi / 5) for p in grp)
        out.append((r, float(z), phases[0]))
    return tuple(out)


# ----------------------------------------------------------------------
# ring stacks

def _cap_points(kind, n, base_phase, z, direction):
    """Vertices a cap adds above (+1) or below (-1) its base ring, and the
    census of the faces it contributes (lateral plus top, no base)."""
    if kind == "pyramid":
        pts = np.array([[0.0, 0.0, z + direction * pyramid_height(n)]])
        return pts, {3: n}
    if kind == "cupola":
        r = polygon_circumradius(n)
        pts = ring(n, r, z + direction * cupola_height(n),
                   base_phase + math.pi / (2 * n))
        census = {3: n, 4: n}
        census[n] = census.get(n, 0) + 1
        return pts, census
    if kind == "rotunda":
        (rm, zm, pm), (rt, zt, pt) = _rotunda_rings()
        pts = np.vstack([ring(5, rm, z + direction * zm, base_phase + pm),
                         ring(5, rt, z + direction * zt, base_phase + pt)])
        return pts, {3: 10, 5: 6}
    raise ValueError(kind)


def _merge_census(*parts):
    total = {}
    for part in parts:
        for k, v in part.items():
            total[k] = total.get(k, 0) + v
    return total


def _stack(label, n, top, belt=None, bottom=None, gyro=False):
    """Cap + optional belt + (base face | mirrored cap), hulled and checked."""
    m = n if top == "pyramid" else 2 * n
    r = polygon_circumradius(m)
    pieces = [ring(m, r, 0.0)]
    top_pts, top_census = _cap_points(top, n, 0.0, 0.0, +1)
    pieces.append(top_pts)
    parts = [top_census]

    if belt == "prism":
        bz, bp = -1.0, 0.0
        pieces.append(ring(m, r, bz, bp))
        parts.append({4: m})
    elif belt == "antiprism":
        bz, bp = -antiprism_height(m), math.pi / m
        pieces.append(ring(m, r, bz, bp))
        parts.append({3: 2 * m})
    else:
        bz, bp = 0.0, 0.0

    if bottom is None:
        parts.append({m: 1})
    else:
        phase = bp + (math.pi / n if gyro else 0.0)
        bot_pts, bot_census = _cap_points(bottom, n, phase, bz, -1)
        pieces.append(bot_pts)
        parts.append(bot_census)

    mesh = convex_mesh(np.vstack(pieces), label)
    return check_solid(mesh, census=_merge_census(*parts))


def _gyrobifastigium():
    s3 = math.sqrt(3.0) / 2.0
    pts = [(-.5, -.5, 0), (.5, -.5, 0), (.5, .5, 0), (-.5, .5, 0),
           (0, -.5, s3), (0, .5, s3), (-.5, 0, -s3), (.5, 0, -s3)]
    return check_solid(convex_mesh(np.array(pts), "gyrobifastigium"),
                       census={3: 4, 4: 4})


# ----------------------------------------------------------------------
# cap surgery on existing solids

def _augmented(base, face_ids, label, cupola=False, alts=None):
    """Glue a pyramid (or a cupola, for even faces) onto each listed face."""
    pts = [base.vertices]
    census = dict(face_census(base))
    for i, f in enumerate(face_ids):
        face = base.faces[f]
        k = len(face)
        c = base.face_centroid(f)
        nrm = base.face_normal(f)
        if not cupola:
            census[k] -= 1
            census[3] = census.get(3, 0) + k
            pts.append((c + pyramid_height(k) * nrm)[None, :])
        else:
            n = k // 2
            census[k] -= 1
            census[3] = census.get(3, 0) + n
            census[4] = census.get(4, 0) + n
            census[n] = census.get(n, 0) + 1
            ring_pts = []
            corners = [base.vertices[v] for v in face]
            alt = alts[i]
            for j in range(n):
                mid = (corners[(2 * j + alt) % k] +
                       corners[(2 * j + 1 + alt) % k]) / 2.0
                d = mid - c
                d = d - nrm * np.dot(d, nrm)
                d /= np.linalg.norm(d)
                ring_pts.append(c + cupola_height(n) * nrm +
                                polygon_circumradius(n) * d)
            pts.append(np.array(ring_pts))
    census = {k: v for k, v in census.items() if v}
    return check_solid(convex_mesh(np.vstack(pts), label), census=census)


def _augmented_cupola(base, face_ids, label):
    # each face cycle starts at an arbitrary vertex, so the cupola phase is
    # settled per face: the wrong one creates coplanar faces that the hull
    # merges away, which the census check rejects on a single-face trial
    alts = []
    for f in face_ids:
        for alt in (0, 1):
            try:
                _augmented(base, [f], label, cupola=True, alts=[alt])
                alts.append(alt)
                break
            except SolidConstructionError:
                if alt == 1:
                    raise
    return _augmented(base, face_ids, label, cupola=True, alts=alts)


def _diminished(base, vertex_groups, label, census):
    drop = set(itertools.chain.from_iterable(vertex_groups))
    keep = [v for v in range(len(base.vertices)) if v not in drop]
    return check_solid(convex_mesh(base.vertices[keep], label), census=census)


def _prism_side_faces(mesh, count, picks):
    """Square side faces of a prism, in azimuth order, selected by index."""
    sides = [f for f in range(len(mesh.faces))
             if len(mesh.faces[f]) == 4 and abs(mesh.face_normal(f)[2]) < 0.5]
    if len(sides) != count:
        raise SolidConstructionError("expected %d side faces" % count)
    sides.sort(key=lambda f: math.atan2(mesh.face_normal(f)[1],
                                        mesh.face_normal(f)[0]) % (2 * math.pi))
    return [sides[i] for i in picks]


def _faces_by_dots(mesh, size, dots, tol=0.05):
    """First combination of `size`-gon faces whose pairwise normal dot
    products match `dots` (upper-triangle order)."""
    cands = [f for f in range(len(mesh.faces)) if len(mesh.faces[f]) == size]
    k = round((1 + math.sqrt(1 + 8 * len(dots))) / 2)
    normals = {f: mesh.face_normal(f) for f in cands}
    for combo in itertools.combinations(cands, k):
        got = [float(np.dot(normals[a], normals[b]))
               for a, b in itertools.combinations(combo, 2)]
        if all(abs(g - d) <= tol for g, d in zip(sorted(got), sorted(dots))):
            return list(combo)
    raise SolidConstructionError("no %d-face combo with dots %r" % (size, dots))


META = -1.0 / math.sqrt(5.0)


def _vertices_by_dots(mesh, dots, tol=0.05):
    n = len(mesh.vertices)
    k = round((1 + math.sqrt(1 + 8 * len(dots))) / 2)
    dirs = [mesh.vertices[v] / np.linalg.norm(mesh.vertices[v])
            for v in range(n)]
    for combo in itertools.combinations(range(n), k):
        got = [float(np.dot(dirs[a], dirs[b]))
               for a, b in itertools.combinations(combo, 2)]
        if all(abs(g - d) <= tol for g, d in zip(sorted(got), sorted(dots))):
            return list(combo)
    raise SolidConstructionError("no vertex combo with dots %r" % dots)


def _modified_rhombicosidodecahedron(label, gyrate=0, diminish=0):
    """Gyrate and/or cut away pentagonal caps, all pairwise para or meta.

    Positions are para for two operations at dot -1, meta otherwise; with
    three operations all pairs are meta.
    """
    base = rhombicosidodecahedron()
    total = gyrate + diminish
    if total == 1:
        dots = []
    elif "para" in label:
        dots = [-1.0] if total == 2 else None
    else:
        dots = [META] * (total * (total - 1) // 2)
    faces = _faces_by_dots(base, 5, dots)

    pts = base.vertices.copy()
    for f in faces[:gyrate]:
        axis = base.face_centroid(f)
        rot = _axis_rotation(axis, math.pi / 5.0)
        idx = list(base.faces[f])
        pts[idx] = pts[idx] @ rot.T

    drop = set()
    for f in faces[gyrate:gyrate + diminish]:
        drop.update(base.faces[f])
    keep = [v for v in range(len(pts)) if v not in drop]

    census = {3: 20 - 5 * diminish, 4: 30 - 5 * diminish, 5: 12 - diminish}
    if diminish:
        census[10] = diminish
    return check_solid(convex_mesh(pts[keep], label), census=census)


# ----------------------------------------------------------------------
# the catalogue

def _stack_recipe(n, top, belt=None, bottom=None, gyro=False):
    def build(label):
        return _stack(label, n, top, belt=belt, bottom=bottom, gyro=gyro)
    return build


def _j49_57(n, picks):
    def build(label):
        base = prism(n)
        return _augmented(base, _prism_side_faces(base, n, picks), label)
    return build


def _j58_61(dots):
    def build(label):
        base = dodecahedron()
        return _augmented(base, _faces_by_dots(base, 5, dots), label)
    return build


def _j62_63(count):
    def build(label):
        base = icosahedron()
        dots = [META] * (count * (count - 1) // 2)
        drop = _vertices_by_dots(base, dots)
        census = {3: 20 - 5 * count, 5: count}
        return _diminished(base, [[v] for v in drop], label, census)
    return build


def _aug_truncated(base_fn, size, dots):
    def build(label):
        base = base_fn()
        return _augmented_cupola(base, _faces_by_dots(base, size, dots), label)
    return build


def _rhicosi(gyrate, diminish):
    def build(label):
        return _modified_rhombicosidodecahedron(label, gyrate, diminish)
    return build


JOHNSON_RECIPES = {
    1: ("square pyramid", _stack_recipe(4, "pyramid")),
    2: ("pentagonal pyramid", _stack_recipe(5, "pyramid")),
    3: ("triangular cupola", _stack_recipe(3, "cupola")),
    4: ("square cupola", _stack_recipe(4, "cupola")),
    5: ("pentagonal cupola", _stack_recipe(5, "cupola")),
    6: ("pentagonal rotunda", _stack_recipe(5, "rotunda")),
    7: ("elongated triangular pyramid", _stack_recipe(3, "pyramid", "prism")),
    8: ("elongated square pyramid", _stack_recipe(4, "pyramid", "prism")),
    9: ("elongated pentagonal pyramid", _stack_recipe(5, "pyramid", "prism")),
    10: ("gyroelongated square pyramid", _stack_recipe(4, "pyramid", "antiprism")),
    11: ("gyroelongated pentagonal pyramid", _stack_recipe(5, "pyramid", "antiprism")),
    12: ("triangular bipyramid", _stack_recipe(3, "pyramid", None, "pyramid")),
    13: ("pentagonal bipyramid", _stack_recipe(5, "pyramid", None, "pyramid")),
    14: ("elongated triangular bipyramid", _stack_recipe(3, "pyramid", "prism", "pyramid")),
    15: ("elongated square bipyramid", _stack_recipe(4, "pyramid", "prism", "pyramid")),
    16: ("elongated pentagonal bipyramid", _stack_recipe(5, "pyramid", "prism", "pyramid")),
    17: ("gyroelongated square bipyramid", _stack_recipe(4, "pyramid", "antiprism", "pyramid")),
    18: ("elongated triangular cupola", _stack_recipe(3, "cupola", "prism")),
    19: ("elongated square cupola", _stack_recipe(4, "cupola", "prism")),
    20: ("elongated pentagonal cupola", _stack_recipe(5, "cupola", "prism")),
    21: ("elongated pentagonal rotunda", _stack_recipe(5, "rotunda", "prism")),
    22: ("gyroelongated triangular cupola", _stack_recipe(3, "cupola", "antiprism")),
    23: ("gyroelongated square cupola", _stack_recipe(4, "cupola", "antiprism")),
    24: ("gyroelongated pentagonal cupola", _stack_recipe(5, "cupola", "antiprism")),
    25: ("gyroelongated pentagonal rotunda", _stack_recipe(5, "rotunda", "antiprism")),
    26: ("gyrobifastigium", lambda label: _gyrobifastigium()),
    27: ("triangular orthobicupola", _stack_recipe(3, "cupola", None, "cupola")),
    28: ("square orthobicupola", _stack_recipe(4, "cupola", None, "cupola")),
    29: ("square gyrobicupola", _stack_recipe(4, "cupola", None, "cupola", gyro=True)),
    30: ("pentagonal orthobicupola", _stack_recipe(5, "cupola", None, "cupola")),
    31: ("pentagonal gyrobicupola", _stack_recipe(5, "cupola", None, "cupola", gyro=True)),
    32: ("pentagonal orthocupolarotunda", _stack_recipe(5, "cupola", None, "rotunda")),
    33: ("pentagonal gyrocupolarotunda", _stack_recipe(5, "cupola", None, "rotunda", gyro=True)),
    34: ("pentagonal orthobirotunda", _stack_recipe(5, "rotunda", None, "rotunda")),
    35: ("elongated triangular orthobicupola", _stack_recipe(3, "cupola", "prism", "cupola")),
    36: ("elongated triangular gyrobicupola", _stack_recipe(3, "cupola", "prism", "cupola", gyro=True)),
    37: ("elongated square gyrobicupola", _stack_recipe(4, "cupola", "prism", "cupola", gyro=True)),
    38: ("elongated pentagonal orthobicupola", _stack_recipe(5, "cupola", "prism", "cupola")),
    39: ("elongated pentagonal gyrobicupola", _stack_recipe(5, "cupola", "prism", "cupola", gyro=True)),
    40: ("elongated pentagonal orthocupolarotunda", _stack_recipe(5, "cupola", "prism", "rotunda")),
    41: ("elongated pentagonal gyrocupolarotunda", _stack_recipe(5, "cupola", "prism", "rotunda", gyro=True)),
    42: ("elongated pentagonal orthobirotunda", _stack_recipe(5, "rotunda", "prism", "rotunda")),
    43: ("elongated pentagonal gyrobirotunda", _stack_recipe(5, "rotunda", "prism", "rotunda", gyro=True)),
    44: ("gyroelongated triangular bicupola", _stack_recipe(3, "cupola", "antiprism", "cupola")),
    45: ("gyroelongated square bicupola", _stack_recipe(4, "cupola", "antiprism", "cupola")),
    46: ("gyroelongated pentagonal bicupola", _stack_recipe(5, "cupola", "antiprism", "cupola")),
    47: ("gyroelongated pentagonal cupolarotunda", _stack_recipe(5, "cupola", "antiprism", "rotunda")),
    48: ("gyroelongated pentagonal birotunda", _stack_recipe(5, "rotunda", "antiprism", "rotunda")),
    49: ("augmented triangular prism", _j49_57(3, [0])),
    50: ("biaugmented triangular prism", _j49_57(3, [0, 1])),
    51: ("triaugmented triangular prism", _j49_57(3, [0, 1, 2])),
    52: ("augmented pentagonal prism", _j49_57(5, [0])),
    53: ("biaugmented pentagonal prism", _j49_57(5, [0, 2])),
    54: ("augmented hexagonal prism", _j49_57(6, [0])),
    55: ("parabiaugmented hexagonal prism", _j49_57(6, [0, 3])),
    56: ("metabiaugmented hexagonal prism", _j49_57(6, [0, 2])),
    57: ("triaugmented hexagonal prism", _j49_57(6, [0, 2, 4])),
    58: ("augmented dodecahedron", _j58_61([])),
    59: ("parabiaugmented dodecahedron", _j58_61([-1.0])),
    60: ("metabiaugmented dodecahedron", _j58_61([META])),
    61: ("triaugmented dodecahedron", _j58_61([META] * 3)),
    62: ("metabidiminished icosahedron", _j62_63(2)),
    63: ("tridiminished icosahedron", _j62_63(3)),
    65: ("augmented truncated tetrahedron", _aug_truncated(truncated_tetrahedron, 6, [])),
    66: ("augmented truncated cube", _aug_truncated(truncated_cube, 8, [])),
    67: ("biaugmented truncated cube", _aug_truncated(truncated_cube, 8, [-1.0])),
    68: ("augmented truncated dodecahedron", _aug_truncated(truncated_dodecahedron, 10, [])),
    69: ("parabiaugmented truncated dodecahedron", _aug_truncated(truncated_dodecahedron, 10, [-1.0])),
    70: ("metabiaugmented truncated dodecahedron", _aug_truncated(truncated_dodecahedron, 10, [META])),
    71: ("triaugmented truncated dodecahedron", _aug_truncated(truncated_dodecahedron, 10, [META] * 3)),
    72: ("gyrate rhombicosidodecahedron", _rhicosi(1, 0)),
    73: ("parabigyrate rhombicosidodecahedron", _rhicosi(2, 0)),
    74: ("metabigyrate rhombicosidodecahedron", _rhicosi(2, 0)),
    75: ("trigyrate rhombicosidodecahedron", _rhicosi(3, 0)),
    76: ("diminished rhombicosidodecahedron", _rhicosi(0, 1)),
    77: ("paragyrate diminished rhombicosidodecahedron", _rhicosi(1, 1)),
    78: ("metagyrate diminished rhombicosidodecahedron", _rhicosi(1, 1)),
    79: ("bigyrate diminished rhombicosidodecahedron", _rhicosi(2, 1)),
    80: ("parabidiminished rhombicosidodecahedron", _rhicosi(0, 2)),
    81: ("metabidiminished rhombicosidodecahedron", _rhicosi(0, 2)),
    82: ("gyrate bidiminished rhombicosidodecahedron", _rhicosi(1, 2)),
    83: ("tridiminished rhombicosidodecahedron", _rhicosi(0, 3)),
}


@lru_cache(maxsize=None)
def johnson_solid(number):
    name, build = JOHNSON_RECIPES[number]
    return build(name)


def johnson_numbers():
    return sorted(JOHNSON_RECIPES)


def johnson_solids():
    return [johnson_solid(n) for n in johnson_numbers()]
