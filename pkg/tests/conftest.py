"""Shared triangle factories for the test suite.

All randomness is seeded by the caller so every test run sees the same
corpus; generators reject thin or ambiguous triangles so the properties
under test are about structure, not conditioning.
"""

import math
import random

from tristeiner.errors import DegenerateGeometry
from tristeiner.geom import Point, TerminalTriangle, angles, classify

WIDE = 2.0 * math.pi / 3.0


def make(p0, p1, p2) -> TerminalTriangle:
    return TerminalTriangle(Point(*p0), Point(*p1), Point(*p2))


def equilateral(side: float = 1.0) -> TerminalTriangle:
    return make((0.0, 0.0), (side, 0.0), (side / 2.0, side * math.sqrt(3.0) / 2.0))


# the three worked examples used throughout: interior scalene, wide, right
SCALENE = ((0.0, 0.0), (4.0, 0.0), (1.0, 3.0))
WIDE_TRI = ((0.0, 0.0), (1.0, 0.0), (-1.0, 0.2))
RIGHT_ISO = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


def random_triangle(rng: random.Random, lo=-2.0, hi=2.0, min_area2=0.1) -> TerminalTriangle:
    while True:
        pts = [(rng.uniform(lo, hi), rng.uniform(lo, hi)) for _ in range(3)]
        area2 = abs(
            (pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1])
            - (pts[2][0] - pts[0][0]) * (pts[1][1] - pts[0][1])
        )
        if area2 > min_area2:
            return make(*pts)


def random_interior_triangle(rng: random.Random) -> TerminalTriangle:
    while True:
        t = random_triangle(rng)
        if classify(t).is_interior:
            return t


def random_wide_triangle(rng: random.Random) -> TerminalTriangle:
    """A triangle whose largest internal angle is at least 2*pi/3."""
    while True:
        ang = rng.uniform(WIDE + 0.01, math.pi - 0.15)
        base = rng.uniform(0.0, 2.0 * math.pi)
        r1 = rng.uniform(0.5, 2.0)
        r2 = rng.uniform(0.5, 2.0)
        a = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        b = (a[0] + r1 * math.cos(base), a[1] + r1 * math.sin(base))
        c = (a[0] + r2 * math.cos(base + ang), a[1] + r2 * math.sin(base + ang))
        try:
            t = make(a, b, c)
        except DegenerateGeometry:
            continue
        if not classify(t).is_interior:
            return t


def random_generic_triangle(rng: random.Random, gap: float = 0.05) -> TerminalTriangle:
    """Interior Steiner point and internal angles pairwise separated by gap."""
    while True:
        t = random_interior_triangle(rng)
        angs = sorted(angles(t))
        if angs[1] - angs[0] > gap and angs[2] - angs[1] > gap:
            return t
