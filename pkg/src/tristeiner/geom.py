"""2D primitives: points, angles, triangle classification, bisector residuals.

Angle computations go through atan2 of cross/dot pairs rather than acos of
normalized dots, which keeps full accuracy for angles near 0 and pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry

# Rays shorter than this are considered zero-length for angle purposes.
RAY_EPS = 1e-12

# Construction tolerance for distinctness / collinearity of terminals.
TRIANGLE_EPS = 1e-9

# Classification tie tolerance on the 2*pi/3 test.
TIE_TOL = 1e-12

WIDE_ANGLE = 2.0 * math.pi / 3.0

VERTEX_IDS = ("a", "b", "c")


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateGeometry("point coordinates must be finite")


def dist(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


@dataclass(frozen=True)
class TerminalTriangle:
    a: Point
    b: Point
    c: Point

    def __post_init__(self):
        d_ab = dist(self.a, self.b)
        d_bc = dist(self.b, self.c)
        d_ac = dist(self.a, self.c)
        if min(d_ab, d_bc, d_ac) <= TRIANGLE_EPS:
            raise DegenerateGeometry(
                "terminals must be pairwise distinct (min pairwise distance > 1e-9)"
            )
        area2 = abs(
            (self.b.x - self.a.x) * (self.c.y - self.a.y)
            - (self.b.y - self.a.y) * (self.c.x - self.a.x)
        )
        if area2 <= TRIANGLE_EPS:
            raise DegenerateGeometry(
                "terminals must be non-collinear (twice signed area magnitude > 1e-9)"
            )

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.a, self.b, self.c)

    def vertex(self, vid: str) -> Point:
        return self.vertices[VERTEX_IDS.index(vid)]

    def side_lengths(self) -> tuple[float, float, float]:
        """Lengths (|AB|, |BC|, |AC|)."""
        return (dist(self.a, self.b), dist(self.b, self.c), dist(self.a, self.c))

    def perimeter(self) -> float:
        s = self.side_lengths()
        return s[0] + s[1] + s[2]

    def scale(self) -> float:
        """Longest side; used to make tolerances scale-aware."""
        return max(self.side_lengths())


def angle_at(apex: Point, p: Point, q: Point) -> float:
    """Undirected angle p-apex-q in [0, pi]; symmetric in p and q."""
    ux, uy = p.x - apex.x, p.y - apex.y
    vx, vy = q.x - apex.x, q.y - apex.y
    if math.hypot(ux, uy) < RAY_EPS or math.hypot(vx, vy) < RAY_EPS:
        raise DegenerateGeometry("angle_at: zero-length ray at apex")
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return math.atan2(abs(cross), dot)


def angles(t: TerminalTriangle) -> tuple[float, float, float]:
    """Internal angles at (a, b, c)."""
    return (
        angle_at(t.a, t.b, t.c),
        angle_at(t.b, t.a, t.c),
        angle_at(t.c, t.a, t.b),
    )


@dataclass(frozen=True)
class Classification:
    kind: str  # "interior_steiner_point" or "wide_angle"
    wide_vertex: str | None = None

    @property
    def is_interior(self) -> bool:
        return self.kind == "interior_steiner_point"


def classify(t: TerminalTriangle, tie_tol: float = TIE_TOL) -> Classification:
    """Interior Steiner point iff every internal angle < 2*pi/3 - tie_tol.

    Exact-boundary triangles classify as wide: there the Steiner point sits on
    the vertex, so the wide-angle pathway is the correct limit.
    """
    angs = angles(t)
    kmax = max(range(3), key=lambda k: angs[k])
    if angs[kmax] < WIDE_ANGLE - tie_tol:
        return Classification("interior_steiner_point")
    return Classification("wide_angle", VERTEX_IDS[kmax])


def bisector_residual(incoming_from: Point, anchor: Point, out1: Point, out2: Point) -> float:
    """angle(incoming_from, anchor, out1) - angle(incoming_from, anchor, out2).

    Zero iff the incoming edge bisects the angle between the two outgoing
    edges. Used as the root-finding target for anchor placement.
    """
    return angle_at(anchor, incoming_from, out1) - angle_at(anchor, incoming_from, out2)


def barycentric(t: TerminalTriangle, p: Point) -> tuple[float, float, float]:
    """Barycentric coordinates of p with respect to t (sum to 1)."""
    x1, y1 = t.a.x, t.a.y
    x2, y2 = t.b.x, t.b.y
    x3, y3 = t.c.x, t.c.y
    det = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3)
    la = ((y2 - y3) * (p.x - x3) + (x3 - x2) * (p.y - y3)) / det
    lb = ((y3 - y1) * (p.x - x3) + (x1 - x3) * (p.y - y3)) / det
    return (la, lb, 1.0 - la - lb)


def rotate(p: Point, center: Point, ang: float) -> Point:
    """Rotate p about center by ang radians (counterclockwise)."""
    ca, sa = math.cos(ang), math.sin(ang)
    dx, dy = p.x - center.x, p.y - center.y
    return Point(center.x + ca * dx - sa * dy, center.y + sa * dx + ca * dy)
