"""Steiner (Fermat-Torricelli) point and the Steiner tree length over three terminals.

The primary construction is analytic: the Torricelli intersection of the two
lines joining each vertex to the apex of the outward equilateral triangle on
the opposite side. A Weiszfeld fixed-point iteration is provided as an
independent oracle for tests; it is never used by the solver itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry, NoConvergence
from .geom import (
    VERTEX_IDS,
    Classification,
    Point,
    TerminalTriangle,
    classify,
    dist,
    rotate,
)


@dataclass(frozen=True)
class SteinerInfo:
    point: Point
    kind: str  # "interior" or "at_vertex"
    at_vertex: str | None
    spoke_lengths: tuple[float, float, float]  # (|OA|, |OB|, |OC|)
    l_st: float


def _outward_apex(p: Point, q: Point, opposite: Point) -> Point:
    """Apex of the equilateral triangle on segment pq, on the side away from `opposite`."""
    third = math.pi / 3.0
    cand = rotate(q, p, third)
    side_opp = (q.x - p.x) * (opposite.y - p.y) - (q.y - p.y) * (opposite.x - p.x)
    side_cand = (q.x - p.x) * (cand.y - p.y) - (q.y - p.y) * (cand.x - p.x)
    if side_opp * side_cand > 0.0:
        cand = rotate(q, p, -third)
    return cand


def _line_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Point:
    """Intersection of lines p1p2 and q1q2."""
    dx1, dy1 = p2.x - p1.x, p2.y - p1.y
    dx2, dy2 = q2.x - q1.x, q2.y - q1.y
    den = dx1 * dy2 - dy1 * dx2
    if abs(den) < 1e-15:
        raise DegenerateGeometry("Torricelli lines are parallel")
    s = ((q1.x - p1.x) * dy2 - (q1.y - p1.y) * dx2) / den
    return Point(p1.x + s * dx1, p1.y + s * dy1)


def steiner_info(t: TerminalTriangle, cls: Classification | None = None) -> SteinerInfo:
    """Steiner point, spoke lengths and Steiner tree length for t.

    Wide-angle triangles put the point at the wide vertex; its own "spoke"
    is reported as 0 so downstream phase code can treat both cases uniformly.
    """
    if cls is None:
        cls = classify(t)
    if cls.is_interior:
        apex_a = _outward_apex(t.b, t.c, t.a)  # equilateral on BC away from A
        apex_b = _outward_apex(t.a, t.c, t.b)
        o = _line_intersection(t.a, apex_a, t.b, apex_b)
        spokes = (dist(o, t.a), dist(o, t.b), dist(o, t.c))
        return SteinerInfo(o, "interior", None, spokes, sum(spokes))
    vid = cls.wide_vertex
    k = VERTEX_IDS.index(vid)
    verts = t.vertices
    o = verts[k]
    spokes = [dist(o, v) for v in verts]
    spokes[k] = 0.0
    return SteinerInfo(o, "at_vertex", vid, tuple(spokes), sum(spokes))


def weiszfeld_point(t: TerminalTriangle, tol: float = 1e-12, max_iter: int = 10000) -> Point:
    """Fermat point by Weiszfeld iteration, from the centroid.

    Independent of the Torricelli construction on purpose. If an iterate
    lands on a terminal (the classical singularity) it is nudged off by a
    small perturbation and iteration continues.
    """
    verts = t.vertices
    x = (t.a.x + t.b.x + t.c.x) / 3.0
    y = (t.a.y + t.b.y + t.c.y) / 3.0
    scale = t.scale()
    for _ in range(max_iter):
        wsum = 0.0
        nx = 0.0
        ny = 0.0
        singular = False
        for v in verts:
            d = math.hypot(x - v.x, y - v.y)
            if d < 1e-15 * scale:
                singular = True
                break
            w = 1.0 / d
            wsum += w
            nx += v.x * w
            ny += v.y * w
        if singular:
            x += 1e-9 * scale
            y += 1e-9 * scale
            continue
        nx /= wsum
        ny /= wsum
        step = math.hypot(nx - x, ny - y)
        x, y = nx, ny
        if step < tol:
            return Point(x, y)
    raise NoConvergence(f"Weiszfeld did not reach step < {tol} in {max_iter} iterations")
