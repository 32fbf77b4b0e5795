"""Fold a flat net back into its solid by interpolating crease angles.

Each crease carries the signed angle its faces must rotate through to
restore the mesh dihedral.  A fold state at time t applies t times that
angle across every crease, walking the fold tree outward from a stationary
base face.  The t=1 state doubles as a round-trip check: after aligning
the base face with its mesh counterpart, every flat copy of a mesh vertex
must land on the original 3D position.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.transform import Rotation

from .mesh import PipelineError, edge_geometry


class FoldError(PipelineError):
    pass


@dataclass(frozen=True)
class FoldState:
    """Rigid 3D pose of every face at interpolation time t."""

    t: float
    base_face: int
    placements: dict  # face id -> (k, 3) corner positions
    transforms: dict  # face id -> (rotation 3x3, translation 3)


@dataclass(frozen=True)
class RefoldReport:
    passed: bool
    rmse: float        # after base-face alignment
    rmse_full: float   # after unrestricted least-squares alignment
    join_error: float  # worst spread among flat copies of one mesh vertex
    tolerance: float
    points: int


def target_fold_angles(mesh):
    """Crease angle per interior edge: pi minus the dihedral."""
    return {g.edge: g.fold_angle for g in edge_geometry(mesh)}


def fold_state_at(net, t, base_face=None, fold_angles=None):
    """Pose of the net with every crease folded to t times its target.

    The crease axis runs the way the parent face traverses the shared
    edge, and the child subtree rotates right-handed about it; at t=1 the
    poses reproduce the mesh dihedrals.  ``fold_angles`` may override the
    mesh-derived targets (edge id -> angle).
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t=%r outside [0, 1]" % (t,))
    mesh = net.mesh
    tree = net.tree
    if base_face is None:
        base_face = tree.root_face
    if base_face not in net.placements:
        raise FoldError("base face %r is not in the net" % (base_face,))
    if fold_angles is None:
        fold_angles = target_fold_angles(mesh)

    by_child = {c.child_face: c for c in net.creases}
    eye = np.eye(3)
    transforms = {tree.root_face: (eye, np.zeros(3))}
    for f in tree.order[1:]:
        pf, ei = tree.parent[f]
        crease = by_child[f]
        a = np.array([*net.vertices[crease.net_a].position, 0.0])
        b = np.array([*net.vertices[crease.net_b].position, 0.0])
        axis = b - a
        axis /= np.linalg.norm(axis)
        rot = Rotation.from_rotvec(axis * (t * fold_angles[ei])).as_matrix()
        rp, tp = transforms[pf]
        transforms[f] = (rp @ rot, rp @ (a - rot @ a) + tp)

    if base_face != tree.root_face:
        # re-express everything so the chosen base face stays put
        rb, tb = transforms[base_face]
        rb_inv = rb.T
        transforms = {f: (rb_inv @ r, rb_inv @ (tr - tb))
                      for f, (r, tr) in transforms.items()}

    placements = {}
    for f, flat in net.placements.items():
        pts = np.column_stack([flat, np.zeros(len(flat))])
        r, tr = transforms[f]
        placements[f] = pts @ r.T + tr
    return FoldState(t=float(t), base_face=base_face,
                     placements=placements, transforms=transforms)


# ----------------------------------------------------------------------
# round-trip verification

def _base_face_alignment(mesh, net, state):
    """Rigid map sending the folded base face onto its mesh face."""
    f = state.base_face
    pts = mesh.face_points(f)
    n = mesh.face_normal(f)
    e1 = pts[1] - pts[0]
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    frame = np.column_stack([e1, e2, n])

    flat = state.placements[f]
    u1 = flat[1] - flat[0]
    u1 /= np.linalg.norm(u1)
    # the folded base face lies in a plane; recover its normal from two edges
    u2 = flat[2] - flat[0]
    w = np.cross(u1, u2)
    w /= np.linalg.norm(w)
    u2 = np.cross(w, u1)
    source = np.column_stack([u1, u2, w])

    rot = frame @ source.T
    return rot, pts[0] - rot @ flat[0]


def _kabsch(source, target):
    sc = source.mean(axis=0)
    tc = target.mean(axis=0)
    h = (source - sc).T @ (target - tc)
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    rot = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    return rot, tc - rot @ sc


def _rmse(source, target, rot, trans):
    moved = source @ rot.T + trans
    return float(np.sqrt(np.mean(np.sum((moved - target) ** 2, axis=1))))


def verify_refold(mesh, net, state, tolerance=None):
    """Does the t=1 fold land every flat vertex copy on its mesh vertex?

    The headline RMSE pins the base face to its mesh face first; the
    unrestricted least-squares figure is reported alongside.  ``passed``
    also requires all flat copies of each mesh vertex to meet again.
    """
    if tolerance is None:
        tolerance = 1e-6 * max(mesh.bbox_diagonal(), 1e-30)

    source = []
    target = []
    by_mesh_vertex = {}
    for nv in net.vertices:
        for f, ci in nv.corners:
            p = state.placements[f][ci]
            source.append(p)
            target.append(mesh.vertices[nv.mesh_vertex])
            by_mesh_vertex.setdefault(nv.mesh_vertex, []).append(p)
    source = np.array(source)
    target = np.array(target)

    rot, trans = _base_face_alignment(mesh, net, state)
    rmse = _rmse(source, target, rot, trans)
    rot_full, trans_full = _kabsch(source, target)
    rmse_full = _rmse(source, target, rot_full, trans_full)

    join_error = 0.0
    for pts in by_mesh_vertex.values():
        pts = np.array(pts)
        spread = np.linalg.norm(pts - pts.mean(axis=0), axis=1)
        join_error = max(join_error, float(spread.max()))

    return RefoldReport(
        passed=bool(rmse <= tolerance and join_error <= tolerance),
        rmse=rmse, rmse_full=rmse_full, join_error=join_error,
        tolerance=float(tolerance), points=len(source))


# ----------------------------------------------------------------------
# animation frames

def _format_coord(x):
    return "%.17g" % x


def frame_to_obj(state, order=None):
    """Polygon-soup OBJ text: duplicated vertices, one f record per face."""
    lines = []
    faces = []
    count = 0
    for f in sorted(state.placements) if order is None else order:
        pts = state.placements[f]
        idx = []
        for p in pts:
            lines.append("v %s %s %s" % tuple(_format_coord(c) for c in p))
            count += 1
            idx.append(count)
        faces.append("f " + " ".join(str(i) for i in idx))
    return "\n".join(lines + faces) + "\n"


def export_frames(net, n_frames, out_dir, prefix="frame"):
    """Uniformly sampled fold states written as OBJ files plus an index.

    Returns the index path; the index lists each frame's t and filename.
    """
    if n_frames < 2:
        raise ValueError("need at least 2 frames, got %d" % n_frames)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(n_frames):
        t = i / (n_frames - 1)
        state = fold_state_at(net, t)
        name = "%s_%03d.obj" % (prefix, i)
        (out / name).write_text(frame_to_obj(state))
        entries.append({"file": name, "t": t})
    index = out / ("%s_index.json" % prefix)
    index.write_text(json.dumps({"frames": entries}, indent=2,
                                sort_keys=True) + "\n")
    return index
