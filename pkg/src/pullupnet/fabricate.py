"""Laser-ready output: hole placement, cut/fold SVG, and the plan file.

Holes are sunk a fixed inset along each owning corner's angle bisector so
yarn clears the sheet edge; the cut layer carries the net outline and hole
circles, the fold layer the dashed creases, and a text layer numbers the
holes in stringing order.  The machine-readable plan serializes the same
data canonically so identical runs produce identical bytes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .mesh import PipelineError, edge_geometry

SCHEMA_VERSION = 1

DEFAULT_SCALE_MM = 50.0
DEFAULT_HOLE_RADIUS_MM = 1.5
DEFAULT_INSET_MM = 4.0


class FabricateError(PipelineError):
    pass


class HolePlacementError(FabricateError):
    """A hole disc does not fit inside its face at the requested inset."""

    kind = "hole-placement-failure"


@dataclass(frozen=True)
class Hole:
    index: int
    net_vertex: int
    join_set: int  # mesh vertex id of the owning join set
    face: int
    center: tuple
    radius: float


@dataclass(frozen=True)
class SvgStyle:
    cut_color: str = "#d40000"
    fold_color: str = "#0055d4"
    annot_color: str = "#222222"
    stroke_mm: float = 0.2
    dash_mm: str = "2,1.5"
    font_mm: float = 3.0
    margin_mm: float = 10.0


# ----------------------------------------------------------------------
# hole layout

def _edge_distance(poly, point):
    """Smallest signed distance from the point to the polygon's edge lines;
    positive means left of every edge (inside, for convex CCW faces)."""
    worst = math.inf
    for i in range(len(poly)):
        a = poly[i]
        b = poly[(i + 1) % len(poly)]
        ex, ey = b[0] - a[0], b[1] - a[1]
        norm = math.hypot(ex, ey)
        d = (ex * (point[1] - a[1]) - ey * (point[0] - a[0])) / norm
        worst = min(worst, d)
    return worst


def _corner_bisector(poly, ci):
    p = poly[ci]
    prev = poly[(ci - 1) % len(poly)]
    nxt = poly[(ci + 1) % len(poly)]
    d1 = (prev[0] - p[0], prev[1] - p[1])
    d2 = (nxt[0] - p[0], nxt[1] - p[1])
    n1 = math.hypot(*d1)
    n2 = math.hypot(*d2)
    bx = d1[0] / n1 + d2[0] / n2
    by = d1[1] / n1 + d2[1] / n2
    norm = math.hypot(bx, by)
    if norm < 1e-12:
        return None
    return bx / norm, by / norm


def layout_holes(net, join_sets, hole_radius, inset):
    """One hole per surviving join-set member, sunk along a corner bisector.

    A member's net vertex may weld corners of several faces; the first
    corner whose face admits the whole disc owns the hole.  Units follow
    the net (sheet units).
    """
    if not inset > hole_radius:
        raise ValueError("inset %g must exceed hole radius %g"
                         % (inset, hole_radius))
    holes = []
    for s in sorted(join_sets, key=lambda s: s.mesh_vertex):
        if s.pruned:
            continue
        for member in s.members:
            nv = net.vertices[member]
            placed = None
            tried = []
            for f, ci in nv.corners:
                poly = net.placements[f]
                bis = _corner_bisector(poly, ci)
                if bis is None:
                    continue
                center = (nv.position[0] + inset * bis[0],
                          nv.position[1] + inset * bis[1])
                tried.append(f)
                if _edge_distance(poly, center) >= hole_radius:
                    placed = (f, center)
                    break
            if placed is None:
                raise HolePlacementError(
                    "no face at net vertex %d fits a hole (radius %g, "
                    "inset %g; tried faces %s); increase the sheet scale"
                    % (member, hole_radius, inset, tried))
            holes.append(Hole(index=len(holes), net_vertex=member,
                              join_set=s.mesh_vertex, face=placed[0],
                              center=placed[1], radius=hole_radius))
    return holes


# ----------------------------------------------------------------------
# plan assembly

def build_plan(result, planned, *, seed=None, scale_mm=DEFAULT_SCALE_MM,
               hole_radius_mm=DEFAULT_HOLE_RADIUS_MM,
               inset_mm=DEFAULT_INSET_MM):
    """Assemble the fabrication plan dictionary.

    ``result`` is the UnfoldResult; ``planned`` lists one
    (net, join_sets, string_path) triple per piece in piece order.
    Geometry stays in sheet units; the scale maps them to millimetres.
    """
    pieces = []
    for idx, (net, join_sets, path) in enumerate(planned):
        angles = {g.edge: g.fold_angle for g in edge_geometry(net.mesh)}
        holes = layout_holes(net, join_sets,
                             hole_radius_mm / scale_mm, inset_mm / scale_mm)
        by_net_vertex = {h.net_vertex: h.index for h in holes}
        faces = [{"face": int(f),
                  "points": [[float(x), float(y)] for x, y in pts]}
                 for f, pts in sorted(net.placements.items())]
        boundary = [{"edge": int(seg.mesh_edge), "face": int(seg.face),
                     "na": int(seg.net_a), "nb": int(seg.net_b),
                     "a": _pt(net, seg.net_a), "b": _pt(net, seg.net_b)}
                    for seg in net.boundary]
        creases = [{"edge": int(c.mesh_edge), "parent": int(c.parent_face),
                    "child": int(c.child_face),
                    "a": _pt(net, c.net_a), "b": _pt(net, c.net_b),
                    "angle": float(angles[c.mesh_edge])}
                   for c in net.creases]
        order = [by_net_vertex[v] for v in path.hole_sequence]
        if sorted(order) != [h.index for h in holes]:
            raise FabricateError(
                "string order does not visit each hole exactly once")
        pieces.append({
            "piece": idx,
            "faces": faces,
            "boundary": boundary,
            "creases": creases,
            "holes": [{"id": h.index, "net_vertex": int(h.net_vertex),
                       "join_set": int(h.join_set), "face": int(h.face),
                       "center": [float(h.center[0]), float(h.center[1])],
                       "radius": float(h.radius)} for h in holes],
            "join_sets": [{"mesh_vertex": int(s.mesh_vertex),
                           "members": [int(m) for m in s.members],
                           "depth": int(s.depth),
                           "pruned": bool(s.pruned)} for s in join_sets],
            "string_order": order,
            "string_length": float(path.total_length),
            "string_turning": float(path.total_turning),
            "string_cost": float(path.cost),
            "lambda": float(path.lam),
        })
    return {
        "schema": SCHEMA_VERSION,
        "meta": {
            "mesh": result.mesh.label,
            "heuristic": result.heuristic,
            "seed": seed,
            "pieces": len(pieces),
            "split_count": int(result.split_count),
            "scale_mm": float(scale_mm),
            "hole_radius_mm": float(hole_radius_mm),
            "inset_mm": float(inset_mm),
        },
        "pieces": pieces,
    }


def _pt(net, net_vertex):
    x, y = net.vertices[net_vertex].position
    return [float(x), float(y)]


def export_plan(plan):
    """Canonical JSON bytes: sorted keys, shortest round-trip floats."""
    return (json.dumps(plan, sort_keys=True, separators=(",", ":"),
                       allow_nan=False) + "\n").encode("ascii")


# ----------------------------------------------------------------------
# svg

def _fmt(x):
    if not math.isfinite(x):
        raise FabricateError("non-finite coordinate %r" % (x,))
    return "%.6f" % x


def _outline_loops(piece):
    """Chain boundary segments into closed loops of point coordinates.

    Each outline vertex has exactly one outgoing segment (faces wind one
    way), so the walk is a simple pointer chase per loop.
    """
    segs = {s["na"]: s for s in piece["boundary"]}
    if len(segs) != len(piece["boundary"]):
        raise FabricateError("outline branches: boundary is not simple loops")
    loops = []
    seen = set()
    for start in sorted(segs):
        if start in seen:
            continue
        loop = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            seg = segs[cur]
            loop.append(tuple(seg["a"]))
            cur = seg["nb"]
        loops.append(loop)
    return loops


def _piece_bbox(piece):
    xs = [x for f in piece["faces"] for x, _ in f["points"]]
    ys = [y for f in piece["faces"] for _, y in f["points"]]
    return min(xs), min(ys), max(xs), max(ys)


def _shelf_offsets(plan, style):
    """Deterministic left-to-right shelf layout, one offset per piece (mm)."""
    scale = plan["meta"]["scale_mm"]
    margin = style.margin_mm
    boxes = []
    for piece in plan["pieces"]:
        x0, y0, x1, y1 = _piece_bbox(piece)
        boxes.append((scale * (x1 - x0), scale * (y1 - y0),
                      scale * x0, scale * y0))
    total_w = sum(w for w, _, _, _ in boxes) + margin * (len(boxes) + 1)
    row_limit = max(total_w / math.ceil(math.sqrt(len(boxes))),
                    max(w for w, _, _, _ in boxes) + 2 * margin)

    offsets = []
    x = margin
    y = margin
    row_h = 0.0
    for w, h, bx, by in boxes:
        if x + w + margin > row_limit and x > margin:
            x = margin
            y += row_h + margin
            row_h = 0.0
        offsets.append((x - bx, y - by))
        x += w + margin
        row_h = max(row_h, h)
    width = row_limit
    height = y + row_h + margin
    return offsets, width, height


def export_svg(plan, style=None, piece=None):
    """SVG 1.1 bytes with `cut`, `fold`, and `annot` layers in mm.

    With ``piece`` given, only that piece is drawn; otherwise all pieces
    are shelf-packed onto one sheet.
    """
    if style is None:
        style = SvgStyle()
    pieces = plan["pieces"]
    if piece is not None:
        pieces = [pieces[piece]]
    if not pieces or not any(p["faces"] for p in pieces):
        raise FabricateError("plan has no faces to draw")

    sub = {"schema": plan["schema"], "meta": plan["meta"], "pieces": pieces}
    offsets, width, height = _shelf_offsets(sub, style)
    scale = plan["meta"]["scale_mm"]

    cut = []
    fold = []
    annot = []
    for (dx, dy), pc in zip(offsets, pieces):
        def mm(pt):
            return scale * pt[0] + dx, scale * pt[1] + dy

        for loop in _outline_loops(pc):
            d = "M " + " L ".join("%s %s" % (_fmt(x), _fmt(y))
                                  for x, y in map(mm, loop)) + " Z"
            cut.append('<path d="%s"/>' % d)
        for h in pc["holes"]:
            cx, cy = mm(h["center"])
            cut.append('<circle cx="%s" cy="%s" r="%s"/>'
                       % (_fmt(cx), _fmt(cy), _fmt(scale * h["radius"])))
        for c in pc["creases"]:
            (ax, ay), (bx, by) = mm(c["a"]), mm(c["b"])
            fold.append('<path d="M %s %s L %s %s"/>'
                        % (_fmt(ax), _fmt(ay), _fmt(bx), _fmt(by)))
        order = pc["string_order"]
        centers = {h["id"]: h["center"] for h in pc["holes"]}
        for rank, hole_id in enumerate(order):
            cx, cy = mm(centers[hole_id])
            annot.append('<text x="%s" y="%s">%d</text>'
                         % (_fmt(cx + 1.2), _fmt(cy - 1.2), rank))

    doc = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%smm" height="%smm" viewBox="0 0 %s %s">'
        % (_fmt(width), _fmt(height), _fmt(width), _fmt(height)),
        '<g id="cut" fill="none" stroke="%s" stroke-width="%s">'
        % (style.cut_color, _fmt(style.stroke_mm)),
        *cut,
        "</g>",
        '<g id="fold" fill="none" stroke="%s" stroke-width="%s" '
        'stroke-dasharray="%s">'
        % (style.fold_color, _fmt(style.stroke_mm), style.dash_mm),
        *fold,
        "</g>",
        '<g id="annot" fill="%s" font-size="%s" '
        'font-family="sans-serif" stroke="none">'
        % (style.annot_color, _fmt(style.font_mm)),
        *annot,
        "</g>",
        "</svg>",
    ]
    return ("\n".join(doc) + "\n").encode("utf-8")
