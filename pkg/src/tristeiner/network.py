"""Network data model, shortest-path objective, and structural validators.

A network is at most 6 nodes: the three terminals followed by up to three
anchors. Edge lengths are always recomputed from node positions, never
stored, so perturbing a node cannot leave stale weights behind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geom import (
    VERTEX_IDS,
    Point,
    TerminalTriangle,
    angle_at,
    barycentric,
    bisector_residual,
    dist,
)

# Default disconnection penalty is this factor times the triangle perimeter.
PENALTY_FACTOR = 1e9

# Anchors may touch the triangle boundary (a phase boundary is exactly the
# moment an anchor reaches a terminal), so interiority is violated only when
# a barycentric coordinate goes clearly negative.
INTERIOR_EPS = 1e-12

# An angle at a ray of length d is computable only to about eps*scale/d, and
# solvers place near-merge anchors no tighter, so angle conditions are
# checked only at anchors whose incident edges all exceed
# max(NOISE_RAY / tol, DEGENERATE_EDGE) * scale.
NOISE_RAY = 2e-13
DEGENERATE_EDGE = 1e-9


@dataclass(frozen=True)
class Node:
    id: int
    kind: str  # "terminal" or "anchor"
    label: str | None  # "a"/"b"/"c" for terminals, None for anchors
    pos: Point


@dataclass(frozen=True)
class Objective:
    d_ab: float
    d_bc: float
    d_ac: float
    j: float


@dataclass(frozen=True)
class Network:
    triangle: TerminalTriangle
    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.nodes) < 3 or len(self.nodes) > 6:
            raise ValueError("network needs the 3 terminals and at most 3 anchors")
        for k in range(3):
            node = self.nodes[k]
            if node.kind != "terminal" or node.label != VERTEX_IDS[k]:
                raise ValueError("first three nodes must be the terminals a, b, c")
            if node.pos != self.triangle.vertices[k]:
                raise ValueError("terminal positions must equal the triangle vertices")
        for node in self.nodes[3:]:
            if node.kind != "anchor":
                raise ValueError("nodes after the terminals must be anchors")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loop edge")
            if not (0 <= u < len(self.nodes) and 0 <= v < len(self.nodes)):
                raise ValueError("edge references a missing node")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError("duplicate edge")
            seen.add(key)

    @property
    def anchors(self) -> tuple[Node, ...]:
        return self.nodes[3:]

    def degree(self, node_id: int) -> int:
        return sum(1 for u, v in self.edges if u == node_id or v == node_id)

    def neighbors(self, node_id: int) -> list[int]:
        out = []
        for u, v in self.edges:
            if u == node_id:
                out.append(v)
            elif v == node_id:
                out.append(u)
        return sorted(out)


def terminal_nodes(t: TerminalTriangle) -> tuple[Node, Node, Node]:
    return (
        Node(0, "terminal", "a", t.a),
        Node(1, "terminal", "b", t.b),
        Node(2, "terminal", "c", t.c),
    )


def total_length(n: Network) -> float:
    return sum(dist(n.nodes[u].pos, n.nodes[v].pos) for u, v in n.edges)


def default_penalty(t: TerminalTriangle) -> float:
    return PENALTY_FACTOR * t.perimeter()


def _dijkstra(n: Network, source: int, predecessors: list[int] | None = None) -> list[float]:
    """Label-setting single-source shortest paths.

    Plain O(k^2) scan: at most 6 nodes, a heap would only add overhead. The
    label-setting discipline matters because callers must never assume which
    route between terminals is shortest.
    """
    k = len(n.nodes)
    distv = [math.inf] * k
    distv[source] = 0.0
    done = [False] * k
    adj: list[list[tuple[int, float]]] = [[] for _ in range(k)]
    for u, v in n.edges:
        w = dist(n.nodes[u].pos, n.nodes[v].pos)
        adj[u].append((v, w))
        adj[v].append((u, w))
    for _ in range(k):
        best = -1
        best_d = math.inf
        for i in range(k):
            if not done[i] and distv[i] < best_d:
                best = i
                best_d = distv[i]
        if best < 0:
            break
        done[best] = True
        for v, w in adj[best]:
            nd = best_d + w
            if nd < distv[v]:
                distv[v] = nd
                if predecessors is not None:
                    predecessors[v] = best
    return distv


def evaluate(n: Network, penalty: float | None = None) -> Objective:
    """Objective from three single-source shortest-path runs.

    Disconnected terminal pairs contribute `penalty` (default 1e9 times the
    triangle perimeter) instead of a distance.
    """
    if penalty is None:
        penalty = default_penalty(n.triangle)
    from_a = _dijkstra(n, 0)
    from_b = _dijkstra(n, 1)
    from_c = _dijkstra(n, 2)
    d_ab = from_a[1] if math.isfinite(from_a[1]) else penalty
    d_bc = from_b[2] if math.isfinite(from_b[2]) else penalty
    d_ac = from_c[0] if math.isfinite(from_c[0]) else penalty
    return Objective(d_ab, d_bc, d_ac, d_ab + d_bc + d_ac)


def _shortest_path_edges(n: Network) -> dict[tuple[int, int], int]:
    """Usage count of each edge over the three terminal-pair shortest paths.

    Paths are reconstructed from predecessor arrays of the runs rooted at
    a (for a-b and a-c) and at b (for b-c); ties resolve deterministically
    by node index inside the Dijkstra scan.
    """
    counts: dict[tuple[int, int], int] = {}

    def walk(pred: list[int], target: int):
        v = target
        while pred[v] >= 0:
            u = pred[v]
            key = (min(u, v), max(u, v))
            counts[key] = counts.get(key, 0) + 1
            v = u

    pred_a = [-1] * len(n.nodes)
    d_a = _dijkstra(n, 0, pred_a)
    pred_b = [-1] * len(n.nodes)
    d_b = _dijkstra(n, 1, pred_b)
    if math.isfinite(d_a[1]):
        walk(pred_a, 1)
    if math.isfinite(d_a[2]):
        walk(pred_a, 2)
    if math.isfinite(d_b[2]):
        walk(pred_b, 2)
    return counts


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree" | "interiority" | "bisector" | "angle"
    node_id: int
    detail: float


def validate(n: Network, tol: float = 1e-9) -> list[Violation]:
    """Check the structural optimality conditions at every anchor.

    Empty iff each anchor has degree exactly 3, lies inside the terminal
    triangle (touching the boundary is allowed: that is the merge limit),
    every incident edge that carries two of the three terminal-pair
    shortest paths bisects the angle between the other two incident edges
    (within tol), and the angle between the two single-path edges is at
    most pi/3 + tol.

    Angle conditions are skipped at anchors with a short incident edge: a
    residual at ray d carries round-off of order eps*C/d, where C is the
    coordinate magnitude (not the triangle scale: a small triangle far from
    the origin computes its angles from cancelling large coordinates), so
    demanding tol at rays below NOISE_RAY*C/tol would flag noise, not
    structure.

    The shortest-path usage counts identify each anchor's "own" edge: the
    one toward the terminal it serves lies on two of the three paths, while
    the two structural edges each carry one. A Steiner-tree anchor has all
    three spokes doubly used, which forces the pairwise 2*pi/3 layout.
    """
    violations: list[Violation] = []
    if not n.anchors:
        return violations

    scale = n.triangle.scale()
    coord_mag = max(
        [scale] + [max(abs(v.x), abs(v.y)) for v in n.triangle.vertices]
    )
    noise_ray = max(NOISE_RAY * coord_mag / tol, DEGENERATE_EDGE * scale)
    usage = _shortest_path_edges(n)
    for anchor in n.anchors:
        nbrs = n.neighbors(anchor.id)
        if len(nbrs) != 3:
            violations.append(Violation("degree", anchor.id, float(len(nbrs))))
            continue
        bary = barycentric(n.triangle, anchor.pos)
        if min(bary) < -max(INTERIOR_EPS, tol):
            violations.append(Violation("interiority", anchor.id, min(bary)))
        if any(dist(anchor.pos, n.nodes[v].pos) < noise_ray for v in nbrs):
            continue
        doubled = []
        single = []
        for v in nbrs:
            key = (min(anchor.id, v), max(anchor.id, v))
            if usage.get(key, 0) >= 2:
                doubled.append(v)
            else:
                single.append(v)
        for v in doubled:
            o1, o2 = [w for w in nbrs if w != v]
            res = bisector_residual(
                n.nodes[v].pos, anchor.pos, n.nodes[o1].pos, n.nodes[o2].pos
            )
            if abs(res) > tol:
                violations.append(Violation("bisector", anchor.id, res))
        if len(single) == 2:
            ang = angle_at(anchor.pos, n.nodes[single[0]].pos, n.nodes[single[1]].pos)
            if ang > math.pi / 3.0 + tol:
                violations.append(Violation("angle", anchor.id, ang))
    return violations
