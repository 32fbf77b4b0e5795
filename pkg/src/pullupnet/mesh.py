"""Polygonal mesh ingestion, validation and per-edge fold geometry.

A mesh is a set of 3D vertices plus polygonal faces wound counter-clockwise
when seen from outside.  Closed meshes must be watertight manifolds of genus
zero.  Open meshes (``is_open=True``) arise from splitting and may carry
boundary edges with a single incident face.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


class PipelineError(Exception):
    """Failure with a stable machine-readable ``kind`` for reporting."""

    kind = "internal"


class MeshError(Exception):
    """Base class for mesh construction and geometry failures."""


class ParseError(MeshError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class UnsupportedEntryError(MeshError):
    """Database entry that does not describe a plain solid."""


class DegenerateGeometryError(MeshError):
    """Zero-area face or otherwise unusable geometry."""


@dataclass(frozen=True)
class Edge:
    index: int
    u: int
    v: int
    faces: tuple


@dataclass(frozen=True)
class EdgeGeometry:
    """Fold data for one interior edge.

    ``dihedral`` is the interior angle between the two faces, in (0, 2*pi).
    ``fold_angle`` is pi - dihedral: positive on convex edges, zero when the
    faces are coplanar, negative on reflex edges.
    """

    edge: int
    dihedral: float
    fold_angle: float
    length: float


class Mesh:
    """Immutable vertex / face / edge structure.

    ``source_faces`` and ``source_vertices`` map local indices back to the
    mesh a piece was split from (identity for freshly parsed meshes).
    """

    def __init__(self, vertices, faces, label="", is_open=False,
                 source_faces=None, source_vertices=None):
        self.vertices = np.array(vertices, dtype=float).reshape(-1, 3)
        self.vertices.setflags(write=False)
        self.faces = tuple(tuple(int(i) for i in f) for f in faces)
        self.label = label
        self.is_open = bool(is_open)
        nv = len(self.vertices)
        for fi, face in enumerate(self.faces):
            if len(face) < 3:
                raise MeshError("face %d has fewer than 3 vertices" % fi)
            if len(set(face)) != len(face):
                raise MeshError("face %d repeats a vertex" % fi)
            for i in face:
                if i < 0 or i >= nv:
                    raise MeshError("face %d references vertex %d, have %d"
                                    % (fi, i, nv))
        if source_faces is None:
            source_faces = range(len(self.faces))
        if source_vertices is None:
            source_vertices = range(nv)
        self.source_faces = tuple(int(i) for i in source_faces)
        self.source_vertices = tuple(int(i) for i in source_vertices)

        edge_faces = {}
        for fi, face in enumerate(self.faces):
            for a, b in face_edges(face):
                key = (a, b) if a < b else (b, a)
                edge_faces.setdefault(key, []).append(fi)
        self.edges = tuple(
            Edge(i, u, v, tuple(fs))
            for i, ((u, v), fs) in enumerate(sorted(edge_faces.items())))
        self._edge_index = {(e.u, e.v): e.index for e in self.edges}

        vertex_faces = [[] for _ in range(nv)]
        for fi, face in enumerate(self.faces):
            for i in face:
                vertex_faces[i].append(fi)
        self._vertex_faces = tuple(tuple(fs) for fs in vertex_faces)

    # ------------------------------------------------------------------
    # lookups

    def edge_index(self, a, b):
        """Index of the undirected edge between vertices a and b."""
        key = (a, b) if a < b else (b, a)
        try:
            return self._edge_index[key]
        except KeyError:
            raise MeshError("no edge between vertices %d and %d" % (a, b))

    def edge_between_faces(self, f, g):
        """Index of the shared edge of faces f and g, or None."""
        for a, b in face_edges(self.faces[f]):
            key = (a, b) if a < b else (b, a)
            e = self._edge_index[key]
            if g in self.edges[e].faces:
                return e
        return None

    def vertex_faces(self, v):
        return self._vertex_faces[v]

    def face_points(self, f):
        return self.vertices[list(self.faces[f])]

    def face_normal(self, f):
        """Unit Newell normal of face f."""
        n = newell_normal(self.face_points(f))
        norm = np.linalg.norm(n)
        scale = max(self.bbox_diagonal(), 1.0)
        if norm <= 1e-12 * scale * scale:
            raise DegenerateGeometryError("face %d has (near) zero area" % f)
        return n / norm

    def face_area(self, f):
        return 0.5 * np.linalg.norm(newell_normal(self.face_points(f)))

    def face_centroid(self, f):
        return self.face_points(f).mean(axis=0)

    def bbox_diagonal(self):
        if len(self.vertices) == 0:
            return 0.0
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(span))

    def signed_volume(self):
        """Sum of tetrahedron volumes; positive when wound outward."""
        total = 0.0
        for face in self.faces:
            pts = self.vertices[list(face)]
            for i in range(1, len(face) - 1):
                total += np.dot(pts[0], np.cross(pts[i], pts[i + 1])) / 6.0
        return float(total)

    def surface_centroid(self):
        """Area-weighted mean of face centroids."""
        areas = np.array([self.face_area(f) for f in range(len(self.faces))])
        cents = np.array([self.face_centroid(f) for f in range(len(self.faces))])
        if areas.sum() <= 0:
            return self.vertices.mean(axis=0)
        return (cents * areas[:, None]).sum(axis=0) / areas.sum()

    def face_components(self):
        """Connected components of the face adjacency graph."""
        seen = set()
        comps = []
        for start in range(len(self.faces)):
            if start in seen:
                continue
            comp = []
            stack = [start]
            seen.add(start)
            while stack:
                f = stack.pop()
                comp.append(f)
                for a, b in face_edges(self.faces[f]):
                    e = self.edges[self.edge_index(a, b)]
                    for g in e.faces:
                        if g not in seen:
                            seen.add(g)
                            stack.append(g)
            comps.append(sorted(comp))
        return comps

    def submesh(self, face_ids, label=None):
        """Open sub-mesh made of the given faces, vertices re-indexed."""
        face_ids = sorted(face_ids)
        used = sorted({i for f in face_ids for i in self.faces[f]})
        remap = {v: i for i, v in enumerate(used)}
        faces = [tuple(remap[i] for i in self.faces[f]) for f in face_ids]
        return Mesh(self.vertices[used], faces,
                    label=label if label is not None else self.label,
                    is_open=True,
                    source_faces=[self.source_faces[f] for f in face_ids],
                    source_vertices=[self.source_vertices[v] for v in used])

    def with_faces(self, faces):
        return Mesh(self.vertices, faces, label=self.label,
                    is_open=self.is_open, source_faces=self.source_faces,
                    source_vertices=self.source_vertices)

    def __repr__(self):
        return "Mesh(%r, V=%d, E=%d, F=%d%s)" % (
            self.label, len(self.vertices), len(self.edges), len(self.faces),
            ", open" if self.is_open else "")


def face_edges(face):
    """Directed vertex pairs around a face cycle."""
    return [(face[i], face[(i + 1) % len(face)]) for i in range(len(face))]


def newell_normal(pts):
    n = np.zeros(3)
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        n += np.cross(a, b)
    return n


# ----------------------------------------------------------------------
# parsing

def parse_obj(text, label=""):
    """Parse the v/f subset of Wavefront OBJ.

    Only ``v`` and ``f`` records are honoured; vt/vn/materials and such are
    ignored.  Indices are 1-based.  Raises ParseError with a line number on
    malformed records or out-of-range indices.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    vertices = []
    faces = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v":
            if len(parts) < 4:
                raise ParseError("vertex needs 3 coordinates", ln)
            try:
                vertices.append([float(x) for x in parts[1:4]])
            except ValueError:
                raise ParseError("bad vertex coordinate %r" % (parts[1:4],), ln)
        elif parts[0] == "f":
            if len(parts) < 4:
                raise ParseError("face needs at least 3 vertices", ln)
            face = []
            for token in parts[1:]:
                head = token.split("/")[0]
                try:
                    idx = int(head)
                except ValueError:
                    raise ParseError("bad face index %r" % token, ln)
                if idx < 0:
                    idx = len(vertices) + 1 + idx
                if idx < 1 or idx > len(vertices):
                    raise ParseError("face index %d out of range (%d vertices)"
                                     % (idx, len(vertices)), ln)
                face.append(idx - 1)
            faces.append(face)
    try:
        return Mesh(vertices, faces, label=label)
    except MeshError as exc:
        raise ParseError(str(exc))


def serialize_obj(mesh, comment=None):
    """Write a mesh back out as OBJ text."""
    lines = []
    if comment:
        lines.append("# " + comment)
    for v in mesh.vertices:
        lines.append("v %.17g %.17g %.17g" % (v[0], v[1], v[2]))
    for face in mesh.faces:
        lines.append("f " + " ".join(str(i + 1) for i in face))
    return "\n".join(lines) + "\n"


def parse_netlib(text, label=""):
    """Parse a polyhedron database flat file.

    The file is a sequence of sections, each introduced by a line starting
    with a ``:keyword``.  We honour ``:name``, ``:number`` and ``:solid``;
    everything else is carried along but unused.  The ``:solid`` payload is
    ``nfaces maxverts`` followed by one polygon per face, ``k`` then ``k``
    x y z coordinate triples.  Vertices repeated across faces are welded by
    exact coordinate match.

    Entries without a ``:solid`` section (compounds and other oddities)
    raise UnsupportedEntryError.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith(":"):
            parts = line.split()
            current = parts[0][1:]
            sections.setdefault(current, [])
            sections[current].extend(parts[1:])
        elif current is not None and line:
            sections[current].extend(line.split())
    if "solid" not in sections:
        raise UnsupportedEntryError(
            "entry %r has no :solid section" % (label or "?"))
    name = " ".join(sections.get("name", [])) or label

    tokens = sections["solid"]
    pos = 0

    def take(n):
        nonlocal pos
        if pos + n > len(tokens):
            raise ParseError("section :solid truncated in entry %r" % name)
        chunk = tokens[pos:pos + n]
        pos += n
        return chunk

    def take_int():
        token = take(1)[0]
        try:
            return int(token)
        except ValueError:
            raise ParseError("section :solid expected integer, got %r" % token)

    nfaces = take_int()
    take_int()  # maximum vertices per face, unused
    vertex_ids = {}
    vertices = []
    faces = []
    for _ in range(nfaces):
        k = take_int()
        if k < 3:
            raise ParseError("section :solid face with %d vertices" % k)
        face = []
        for _ in range(k):
            try:
                xyz = tuple(float(t) for t in take(3))
            except ValueError:
                raise ParseError("section :solid bad coordinate in entry %r"
                                 % name)
            if xyz not in vertex_ids:
                vertex_ids[xyz] = len(vertices)
                vertices.append(xyz)
            face.append(vertex_ids[xyz])
        faces.append(face)
    if pos != len(tokens):
        raise ParseError("section :solid has %d trailing tokens in entry %r"
                         % (len(tokens) - pos, name))
    try:
        return Mesh(vertices, faces, label=name)
    except MeshError as exc:
        raise ParseError("entry %r: %s" % (name, exc))


def serialize_netlib(mesh, number=0):
    """Write a mesh as a polyhedron database flat file."""
    lines = [":name", mesh.label or "solid", ":number", str(number)]
    maxk = max(len(f) for f in mesh.faces)
    lines.append(":solid")
    lines.append("%d %d" % (len(mesh.faces), maxk))
    for face in mesh.faces:
        coords = []
        for i in face:
            coords.extend(repr(float(c)) for c in mesh.vertices[i])
        lines.append(str(len(face)) + " " + " ".join(coords))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    items: tuple = ()

    def as_dict(self):
        return {"kind": self.kind, "detail": self.detail,
                "items": list(self.items)}


@dataclass(frozen=True)
class ValidationReport:
    accepted: bool
    violations: tuple = ()

    def as_dict(self):
        return {"accepted": self.accepted,
                "violations": [v.as_dict() for v in self.violations]}

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def validate_manifold(mesh):
    """Check watertightness, manifoldness, orientability and planarity.

    Open meshes are exempt from the closedness and genus checks; boundary
    edges with a single face are then legal.
    """
    violations = []
    tol = 1e-6 * max(mesh.bbox_diagonal(), 1e-30)

    isolated = [v for v in range(len(mesh.vertices))
                if not mesh.vertex_faces(v)]
    if isolated:
        violations.append(Violation(
            "isolated-vertex",
            "%d vertices belong to no face" % len(isolated),
            tuple(isolated)))

    bad_edges = [e.index for e in mesh.edges if len(e.faces) > 2]
    if bad_edges:
        violations.append(Violation(
            "nonmanifold-edge",
            "%d edges bound more than two faces" % len(bad_edges),
            tuple(bad_edges)))
    if not mesh.is_open:
        open_edges = [e.index for e in mesh.edges if len(e.faces) == 1]
        if open_edges:
            violations.append(Violation(
                "not-closed",
                "%d edges bound a single face" % len(open_edges),
                tuple(open_edges)))

    bad_vertices = []
    for v in range(len(mesh.vertices)):
        if mesh.vertex_faces(v) and not _vertex_fan_ok(mesh, v):
            bad_vertices.append(v)
    if bad_vertices:
        violations.append(Violation(
            "nonmanifold-vertex",
            "%d vertices have a broken face fan" % len(bad_vertices),
            tuple(bad_vertices)))

    if not bad_edges:
        try:
            normalize_orientation(mesh)
        except MeshError as exc:
            violations.append(Violation("inconsistent-orientation", str(exc)))

    nonplanar = []
    for f in range(len(mesh.faces)):
        if _plane_deviation(mesh.face_points(f)) > tol:
            nonplanar.append(f)
    if nonplanar:
        violations.append(Violation(
            "nonplanar-face",
            "%d faces deviate from a plane beyond %.3g" % (len(nonplanar), tol),
            tuple(nonplanar)))

    comps = mesh.face_components()
    if len(comps) > 1:
        violations.append(Violation(
            "not-connected", "%d disjoint shells" % len(comps)))
    if not mesh.is_open and not bad_edges and not bad_vertices:
        for comp in comps:
            vs = {i for f in comp for i in mesh.faces[f]}
            es = {mesh.edge_index(a, b) for f in comp
                  for a, b in face_edges(mesh.faces[f])}
            chi = len(vs) - len(es) + len(comp)
            if chi != 2:
                genus = (2 - chi) // 2
                violations.append(Violation(
                    "genus",
                    "Euler characteristic %d, genus %d: surfaces with handles "
                    "cannot be unfolded here" % (chi, genus)))
                break

    return ValidationReport(accepted=not violations,
                            violations=tuple(violations))


def _vertex_fan_ok(mesh, v):
    """True when the faces around v form a single fan (path or cycle)."""
    incident = mesh.vertex_faces(v)
    degree = {f: 0 for f in incident}
    links = 0
    for e in mesh.edges:
        if v not in (e.u, e.v):
            continue
        if len(e.faces) == 2:
            f, g = e.faces
            degree[f] += 1
            degree[g] += 1
            links += 1
        elif len(e.faces) > 2:
            return False
    if any(d > 2 for d in degree.values()):
        return False
    # connectivity of the fan graph
    adj = {f: [] for f in incident}
    for e in mesh.edges:
        if v in (e.u, e.v) and len(e.faces) == 2:
            f, g = e.faces
            adj[f].append(g)
            adj[g].append(f)
    seen = {incident[0]}
    stack = [incident[0]]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in seen:
                seen.add(g)
                stack.append(g)
    if len(seen) != len(incident):
        return False
    ends = sum(1 for d in degree.values() if d < 2)
    if links == len(incident):          # cycle
        return ends == 0
    return ends == 2 or len(incident) == 1


def _plane_deviation(pts):
    centered = pts - pts.mean(axis=0)
    if len(pts) == 3:
        return 0.0
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    return float(np.abs(centered @ vt[-1]).max())


def normalize_orientation(mesh):
    """Return a mesh with consistent, outward-facing winding.

    Face windings are aligned by BFS across shared edges; an edge shared by
    two faces must be traversed in opposite directions.  Closed meshes are
    additionally flipped wholesale if their signed volume is negative.
    Raises MeshError when no consistent assignment exists.
    """
    flip = {}
    for comp in mesh.face_components():
        start = comp[0]
        flip[start] = False
        queue = [start]
        while queue:
            f = queue.pop(0)
            for a, b in face_edges(mesh.faces[f]):
                e = mesh.edges[mesh.edge_index(a, b)]
                if len(e.faces) != 2:
                    continue
                g = e.faces[0] if e.faces[1] == f else e.faces[1]
                if g == f:
                    continue
                same_dir = _traverses(mesh.faces[g], a, b)
                want = flip[f] if not same_dir else not flip[f]
                if g in flip:
                    if flip[g] != want:
                        raise MeshError(
                            "faces %d and %d cannot be wound consistently"
                            % (f, g))
                else:
                    flip[g] = want
                    queue.append(g)
    faces = [tuple(reversed(face)) if flip.get(fi) else face
             for fi, face in enumerate(mesh.faces)]
    out = mesh.with_faces(faces)
    if not mesh.is_open and out.signed_volume() < 0:
        out = out.with_faces([tuple(reversed(f)) for f in faces])
    return out


def _traverses(face, a, b):
    """True when the face cycle contains the directed edge a -> b."""
    for x, y in face_edges(face):
        if (x, y) == (a, b):
            return True
    return False


# ----------------------------------------------------------------------
# fold geometry

def edge_geometry(mesh):
    """EdgeGeometry for every interior (two-face) edge.

    Requires consistent outward winding.  The fold angle is the signed angle
    between the outward normals measured around the shared edge; it is what
    a crease must rotate through to close the solid from flat.
    """
    out = []
    for e in mesh.edges:
        if len(e.faces) != 2:
            continue
        f1, f2 = e.faces
        if _traverses(mesh.faces[f1], e.u, e.v):
            a, b = e.u, e.v
        else:
            a, b = e.v, e.u
        axis = mesh.vertices[b] - mesh.vertices[a]
        length = float(np.linalg.norm(axis))
        if length <= 0:
            raise DegenerateGeometryError("edge %d has zero length" % e.index)
        axis = axis / length
        n1 = mesh.face_normal(f1)
        n2 = mesh.face_normal(f2)
        rho = math.atan2(float(np.dot(np.cross(n1, n2), axis)),
                         float(np.dot(n1, n2)))
        out.append(EdgeGeometry(edge=e.index, dihedral=math.pi - rho,
                                fold_angle=rho, length=length))
    return tuple(out)
