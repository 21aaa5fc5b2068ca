"""Exact optimal networks for every budget.

Phase structure over the budget axis, for terminals with an interior Steiner
point:

    below tree -> Steiner tree -> three anchors -> two anchors -> one anchor
    -> complete triangle

An equilateral anchor triangle grows out of the Steiner point (closed form),
then collapses onto the terminals one at a time. Each merge pins a terminal
and drops one anchor; the surviving anchor families are found by root-finding
on bisector residuals. Wide-angle triangles (an internal angle of 2*pi/3 or
more) skip the three-anchor phase entirely and start growing an isosceles
triangle out of the wide vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateGeometry, OutOfRange, RootFindingFailure
from .fermat import SteinerInfo, steiner_info
from .geom import (
    VERTEX_IDS,
    Point,
    TerminalTriangle,
    angle_at,
    bisector_residual,
    classify,
    dist,
)
from .network import Network, Objective, Node, evaluate, terminal_nodes, total_length

SQRT3 = math.sqrt(3.0)

# L(r) = l_st + GROWTH_RATE * r inside the three-anchor phase.
GROWTH_RATE = 3.0 * (SQRT3 - 1.0)

# J(r) = 2 * l_st + SHRINK_RATE * r inside the three-anchor phase.
SHRINK_RATE = 3.0 * (SQRT3 - 2.0)

RESIDUAL_TOL = 1e-12
MAX_NEWTON_ITER = 200

PHASE_ORDER = {
    "below_tree": 0,
    "steiner_tree": 1,
    "three_anchor": 2,
    "two_anchor": 3,
    "one_anchor": 4,
    "complete": 5,
}


@dataclass(frozen=True)
class Phase:
    tag: str
    pinned: str | None = None  # two_anchor: the merged terminal
    pair: tuple[str, str] | None = None  # one_anchor: the two merged terminals
    edges: tuple[str, ...] | None = None  # below_tree: side subset

    @property
    def order(self) -> int:
        return PHASE_ORDER[self.tag]


@dataclass(frozen=True)
class _Phase2Plan:
    """Continuation data for the two-anchor family pinned at one terminal.

    Anchors are N1 = P + leg*dir(theta + sigma*beta) serving terminal Q1 and
    N2 = P + leg*dir(theta - sigma*beta) serving Q2, so both legs are equal
    by construction and beta is the half apex angle at P.
    """

    pinned_k: int
    q1: int
    q2: int
    sigma: float
    theta0: float
    beta0: float
    leg_start: float  # reported bracket start (0 in the wide-angle case)
    leg_lo: float  # smallest leg the continuation actually solves at
    leg_cap: float  # min adjacent side; the second merge happens exactly here
    knots: tuple[tuple[float, float, float], ...]  # (leg, theta, beta)
    beta_end: float
    merged2_k: int
    survivor_k: int
    anchor_end: Point
    l2: float


@dataclass(frozen=True)
class Thresholds:
    l_min_edge: float
    l_st: float
    l1: float | None  # end of the three-anchor phase; absent for wide triangles
    l2: float
    l3: float
    steiner: SteinerInfo
    merge_order: tuple[str, str, str]  # terminals in merge order
    plan: _Phase2Plan = field(repr=False)


@dataclass(frozen=True)
class SolveResult:
    network: Network
    phase: Phase
    l_used: float
    objective: Objective
    slope: float


def slope_at(alpha: float) -> float:
    """dJ/dL when every moving anchor has half angle alpha: (2cos a - 2)/(2cos a - 1)."""
    if not (0.0 < alpha <= math.pi / 4.0 + 1e-15):
        raise OutOfRange(f"alpha must lie in (0, pi/4], got {alpha}")
    ca = math.cos(alpha)
    return (2.0 * ca - 2.0) / (2.0 * ca - 1.0)


# ---------------------------------------------------------------------------
# root-finding helpers


def _solve_2x2(j11, j12, j21, j22, r1, r2):
    det = j11 * j22 - j12 * j21
    if abs(det) < 1e-300:
        raise RootFindingFailure("singular Jacobian in Newton step")
    return ((-r1 * j22 + r2 * j12) / det, (-r2 * j11 + r1 * j21) / det)


def _damped_newton2(fun, x0, y0, step_fun, tols_fun, max_iter=MAX_NEWTON_ITER,
                    max_step=None):
    """Damped 2D Newton with finite-difference Jacobian.

    fun(x, y) -> (f1, f2); step_fun(x, y) -> (hx, hy) gives the FD steps,
    which must shrink near stiff configurations (tiny incident rays).
    tols_fun(x, y) -> (tol1, tol2) gives per-residual tolerances so an
    angle residual hitting its floating-point noise floor does not block
    convergence of a cleanly computable length residual. Convergence is
    judged by the normalized merit max(|f1|/tol1, |f2|/tol2) < 1. max_step
    caps the per-iteration move so a stiff Jacobian cannot fling the
    iterate onto a spurious root of the same residual system.
    """
    x, y = x0, y0
    try:
        f1, f2 = fun(x, y)
    except DegenerateGeometry as exc:
        raise RootFindingFailure(f"Newton started on a degenerate configuration: {exc}") from exc
    tol1, tol2 = tols_fun(x, y)
    merit = max(abs(f1) / tol1, abs(f2) / tol2)
    for _ in range(max_iter):
        if merit < 1.0:
            return x, y
        hx, hy = step_fun(x, y)
        try:
            g1, g2 = fun(x + hx, y)
            k1, k2 = fun(x, y + hy)
        except DegenerateGeometry:
            # A probe stepped over a collapse point; the opposite one-sided
            # difference is just as valid.
            hx, hy = -hx, -hy
            try:
                g1, g2 = fun(x + hx, y)
                k1, k2 = fun(x, y + hy)
            except DegenerateGeometry as exc:
                raise RootFindingFailure(
                    f"finite-difference probes are degenerate: {exc}"
                ) from exc
        dx, dy = _solve_2x2(
            (g1 - f1) / hx, (k1 - f1) / hy, (g2 - f2) / hx, (k2 - f2) / hy, f1, f2
        )
        if max_step is not None:
            biggest = max(abs(dx), abs(dy))
            if biggest > max_step:
                dx *= max_step / biggest
                dy *= max_step / biggest
        lam = 1.0
        while True:
            try:
                t1, t2 = fun(x + lam * dx, y + lam * dy)
                tmerit = max(abs(t1) / tol1, abs(t2) / tol2)
            except DegenerateGeometry:
                tmerit = math.inf
            if tmerit < merit or tmerit < 1.0:
                x, y = x + lam * dx, y + lam * dy
                f1, f2, merit = t1, t2, tmerit
                break
            lam *= 0.5
            if lam < 1e-12:
                raise RootFindingFailure("Newton line search stalled")
        tol1, tol2 = tols_fun(x, y)
        merit = max(abs(f1) / tol1, abs(f2) / tol2)
    if merit < 1.0:
        return x, y
    raise RootFindingFailure(f"Newton residuals stayed {merit:.2f}x above tolerance")


def _damped_newton1(fun, x0, h, tol=RESIDUAL_TOL, max_iter=MAX_NEWTON_ITER):
    x = x0
    try:
        f = fun(x)
    except DegenerateGeometry as exc:
        raise RootFindingFailure(f"Newton started on a degenerate configuration: {exc}") from exc
    for _ in range(max_iter):
        if abs(f) < tol:
            return x
        try:
            fp = fun(x + h)
        except DegenerateGeometry:
            h = -h
            try:
                fp = fun(x + h)
            except DegenerateGeometry as exc:
                raise RootFindingFailure(
                    f"finite-difference probes are degenerate: {exc}"
                ) from exc
        d = (fp - f) / h
        if d == 0.0:
            raise RootFindingFailure("flat residual in 1D Newton")
        step = -f / d
        lam = 1.0
        while True:
            try:
                t = fun(x + lam * step)
            except DegenerateGeometry:
                t = math.inf
            if abs(t) < abs(f) or abs(t) < tol:
                x += lam * step
                f = t
                break
            lam *= 0.5
            if lam < 1e-12:
                raise RootFindingFailure("1D Newton line search stalled")
    if abs(f) < tol:
        return x
    raise RootFindingFailure(f"1D Newton did not reach residual {tol}")


# ---------------------------------------------------------------------------
# phase 1: equilateral anchor triangle around the Steiner point


def _phase1_nodes(t: TerminalTriangle, si: SteinerInfo, r: float) -> tuple[Point, Point, Point]:
    o = si.point
    out = []
    for k, v in enumerate(t.vertices):
        ux = (v.x - o.x) / si.spoke_lengths[k]
        uy = (v.y - o.y) / si.spoke_lengths[k]
        out.append(Point(o.x + r * ux, o.y + r * uy))
    return tuple(out)


def phase1_config(t: TerminalTriangle, r: float) -> Network:
    """Three anchors on the spokes at distance r from the Steiner point.

    The anchor triangle is equilateral with side r*sqrt(3) and centroid at
    the Steiner point; each terminal keeps a straight stub to its anchor.
    """
    cls = classify(t)
    if not cls.is_interior:
        raise OutOfRange("three-anchor configurations need an interior Steiner point")
    si = steiner_info(t, cls)
    r_max = min(si.spoke_lengths)
    if not (0.0 <= r <= r_max * (1.0 + 1e-12)):
        raise OutOfRange(f"r must lie in [0, {r_max}], got {r}")
    pa, pb, pc = _phase1_nodes(t, si, r)
    nodes = terminal_nodes(t) + (
        Node(3, "anchor", None, pa),
        Node(4, "anchor", None, pb),
        Node(5, "anchor", None, pc),
    )
    edges = ((0, 3), (1, 4), (2, 5), (3, 4), (4, 5), (3, 5))
    return Network(t, nodes, edges)


# ---------------------------------------------------------------------------
# phase 2: isosceles anchor pair pinned at one terminal


def _unit(phi: float) -> tuple[float, float]:
    return (math.cos(phi), math.sin(phi))


class _Phase2System:
    """Bisector residuals for the pinned isosceles family at a fixed leg.

    All residual arithmetic runs in a frame translated to the pinned
    terminal: at coordinates far from the origin, re-subtracting the common
    offset inside every angle evaluation would inject cancellation noise of
    about eps * |coords| instead of eps * scale.
    """

    def __init__(self, t: TerminalTriangle, plan_pinned: int, q1: int, q2: int, sigma: float):
        verts = t.vertices
        self.p = verts[plan_pinned]
        self.t1 = verts[q1]
        self.t2 = verts[q2]
        self.t1_loc = Point(self.t1.x - self.p.x, self.t1.y - self.p.y)
        self.t2_loc = Point(self.t2.x - self.p.x, self.t2.y - self.p.y)
        self.origin = Point(0.0, 0.0)
        self.sigma = sigma
        self.scale = t.scale()
        self.leg = 0.0

    def _anchors_local(self, theta: float, beta: float) -> tuple[Point, Point]:
        s = self.sigma
        u1 = _unit(theta + s * beta)
        u2 = _unit(theta - s * beta)
        return (
            Point(self.leg * u1[0], self.leg * u1[1]),
            Point(self.leg * u2[0], self.leg * u2[1]),
        )

    def anchor_points(self, theta: float, beta: float) -> tuple[Point, Point]:
        n1, n2 = self._anchors_local(theta, beta)
        return (
            Point(self.p.x + n1.x, self.p.y + n1.y),
            Point(self.p.x + n2.x, self.p.y + n2.y),
        )

    def residuals(self, theta: float, beta: float) -> tuple[float, float]:
        n1, n2 = self._anchors_local(theta, beta)
        r1 = bisector_residual(self.t1_loc, n1, self.origin, n2)
        r2 = bisector_residual(self.t2_loc, n2, self.origin, n1)
        return r1, r2

    def fd_steps(self, theta: float, beta: float) -> tuple[float, float]:
        # The residual at an anchor steepens as its terminal ray shrinks
        # (second merge); the FD step must stay well inside that ray.
        n1, n2 = self._anchors_local(theta, beta)
        ray = min(dist(n1, self.t1_loc), dist(n2, self.t2_loc))
        h = min(1e-7, 0.02 * ray / max(self.scale, self.leg))
        h = max(h, 1e-12)
        return h, h

    def tols(self, theta: float, beta: float) -> tuple[float, float]:
        # Angles at an anchor whose shortest incident ray has shrunk to
        # eps*scale can only be evaluated to about machine_eps/eps radians.
        # The ray back to the pinned terminal is the leg itself, which gets
        # tiny just above the Steiner-tree budget in the wide-angle case. A
        # loose angular tolerance near those limits is harmless: the
        # objective is stationary in the anchor positions, so the error
        # enters only quadratically.
        n1, n2 = self._anchors_local(theta, beta)
        leg_rel = self.leg / self.scale
        r1_rel = min(dist(n1, self.t1_loc) / self.scale, leg_rel)
        r2_rel = min(dist(n2, self.t2_loc) / self.scale, leg_rel)
        t1 = max(RESIDUAL_TOL, min(1e-4, 1e-13 / max(r1_rel, 1e-9)))
        t2 = max(RESIDUAL_TOL, min(1e-4, 1e-13 / max(r2_rel, 1e-9)))
        return t1, t2

    def total_length(self, theta: float, beta: float) -> float:
        n1, n2 = self._anchors_local(theta, beta)
        return (
            2.0 * self.leg
            + 2.0 * self.leg * math.sin(beta)
            + dist(n1, self.t1_loc)
            + dist(n2, self.t2_loc)
        )


# The residual system has a spurious root family along beta = pi/2, where
# the isosceles pair folds flat through the pinned terminal. The physical
# branch keeps 2*beta below the pinned angle, so it never enters this band;
# near-degenerate slivers run closest (gap about (pi - angle)/2).
FOLD_GAP = 1e-10


def _phase2_solve_at_leg(sys2: _Phase2System, leg: float, theta: float, beta: float):
    sys2.leg = leg
    # Cap Newton moves well below the distance to the fold so a single leap
    # cannot cross the corridor separating the branches.
    max_step = min(0.15, 0.5 * (math.pi / 2.0 - beta))
    theta, beta = _damped_newton2(
        sys2.residuals, theta, beta, sys2.fd_steps, sys2.tols, max_step=max_step
    )
    if not (1e-12 < beta < math.pi / 2.0 - FOLD_GAP):
        raise RootFindingFailure(f"two-anchor solve left the valid branch (beta={beta})")
    return theta, beta


def _nearest_knot(knots, leg: float):
    best = knots[0]
    for k in knots:
        if abs(k[0] - leg) < abs(best[0] - leg):
            best = k
    return best


def _phase2_march(sys2: _Phase2System, leg_from, theta, beta, leg_to, n_steps=24):
    """Continue the family from leg_from to leg_to, collecting (leg, theta, beta) knots.

    A Newton result that jumps to a different solution branch shows up as a
    discontinuity in total length, so any step whose length change is out of
    proportion to its leg change is rejected and retried shorter.
    """
    theta, beta = _phase2_solve_at_leg(sys2, leg_from, theta, beta)
    knots = [(leg_from, theta, beta)]
    if leg_to == leg_from:
        return knots
    slack = 1e-7 * sys2.scale
    total = sys2.total_length(theta, beta)
    leg = leg_from
    step = (leg_to - leg_from) / n_steps
    while leg < leg_to - 1e-15 * abs(leg_to):
        target = min(leg + step, leg_to)
        try:
            theta_n, beta_n = _phase2_solve_at_leg(sys2, target, theta, beta)
            total_n = sys2.total_length(theta_n, beta_n)
            if not -slack <= total_n - total <= 100.0 * (target - leg) + slack:
                raise RootFindingFailure(
                    f"two-anchor continuation jumped branches near leg {target}"
                )
        except RootFindingFailure:
            step *= 0.5
            if step < 1e-9 * (leg_to - leg_from):
                raise RootFindingFailure(
                    f"phase-2 continuation stalled at leg {leg} of {leg_to}"
                )
            continue
        leg, theta, beta, total = target, theta_n, beta_n, total_n
        knots.append((leg, theta, beta))
    return knots


def _phase2_endpoint(t, plan_pinned, q1, q2, sigma, cap, beta_guess, merged_k):
    """Solve the family at leg = cap with the merging anchor pinned onto its terminal.

    Only the surviving anchor's bisector condition remains; beta is the single
    unknown. When the adjacent sides nearly tie, the survivor sweeps within a
    hair of its own terminal and the residual turns into a step at the root,
    so a bracketed bisection is used rather than Newton. Returns (beta_end,
    survivor anchor point, l2).
    """
    verts = t.vertices
    p = verts[plan_pinned]
    merged_first = merged_k == q1
    qm_w = verts[merged_k]
    qs_w = verts[q2 if merged_first else q1]
    # Work in a frame translated to the pinned terminal (see _Phase2System).
    origin = Point(0.0, 0.0)
    qm = Point(qm_w.x - p.x, qm_w.y - p.y)
    qs = Point(qs_w.x - p.x, qs_w.y - p.y)
    phi_m = math.atan2(qm.y, qm.x)

    def survivor(beta: float) -> Point:
        if merged_first:
            u = _unit(phi_m - 2.0 * sigma * beta)
        else:
            u = _unit(phi_m + 2.0 * sigma * beta)
        return Point(cap * u[0], cap * u[1])

    def res(beta: float) -> float:
        s = survivor(beta)
        return bisector_residual(qs, s, origin, qm)

    try:
        f0 = res(beta_guess)
    except DegenerateGeometry:
        # The survivor already sits on its terminal at the guess: done.
        f0 = 0.0
    bracket = None
    if f0 == 0.0:
        bracket = (beta_guess, beta_guess)
    else:
        for direction in (1.0, -1.0):
            x_prev, f_prev = beta_guess, f0
            step = 1e-7 * max(1.0, abs(beta_guess))
            while step <= 0.2 and bracket is None:
                x = beta_guess + direction * step
                if x >= math.pi / 2.0 - FOLD_GAP:
                    # The fold at beta = pi/2 carries its own spurious roots.
                    break
                try:
                    f = res(x)
                except DegenerateGeometry:
                    bracket = (x, x)
                    break
                if f == 0.0:
                    bracket = (x, x)
                elif (f > 0.0) != (f_prev > 0.0):
                    bracket = (min(x_prev, x), max(x_prev, x))
                else:
                    x_prev, f_prev = x, f
                    step *= 2.0
            if bracket is not None:
                break
        if bracket is None:
            raise RootFindingFailure("two-anchor endpoint bracket not found")
    lo, hi = bracket
    if lo != hi:
        fhi = res(hi)
        while hi - lo > 1e-15 * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            try:
                fm = res(mid)
            except DegenerateGeometry:
                # The survivor sits on its terminal: that is the root.
                lo = hi = mid
                break
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0.0) == (fhi > 0.0):
                hi, fhi = mid, fm
            else:
                lo = mid
    beta_end = 0.5 * (lo + hi)
    s = survivor(beta_end)
    l2 = 2.0 * cap + 2.0 * cap * math.sin(beta_end) + dist(s, qs)
    return beta_end, Point(p.x + s.x, p.y + s.y), l2


def _build_plan(t: TerminalTriangle, si: SteinerInfo, pinned_k: int, wide: bool) -> _Phase2Plan:
    verts = t.vertices
    p = verts[pinned_k]
    q1, q2 = [k for k in range(3) if k != pinned_k]
    t1, t2 = verts[q1], verts[q2]

    if wide:
        b1 = math.atan2(t1.y - p.y, t1.x - p.x)
        b2 = math.atan2(t2.y - p.y, t2.x - p.x)
        # bisector direction via the normalized-sum construction
        sx = math.cos(b1) + math.cos(b2)
        sy = math.sin(b1) + math.sin(b2)
        theta0 = math.atan2(sy, sx)
        beta0 = angle_at(p, t1, t2) - math.pi / 2.0
        leg_start = 0.0
    else:
        o = si.point
        theta0 = math.atan2(o.y - p.y, o.x - p.x)
        beta0 = math.pi / 6.0
        leg_start = SQRT3 * min(si.spoke_lengths)

    ux, uy = _unit(theta0)
    sigma = 1.0 if (ux * (t1.y - p.y) - uy * (t1.x - p.x)) > 0.0 else -1.0
    cap1, cap2 = dist(p, t1), dist(p, t2)
    leg_cap = min(cap1, cap2)
    scale = t.scale()
    sys2 = _Phase2System(t, pinned_k, q1, q2, sigma)

    # Spans narrower than this cannot be continued numerically; the absolute
    # floor matters at the smallest admissible triangle scales, where even a
    # relative window would sit below what angle evaluation resolves.
    near = max(1e-7 * scale, 1e-9)

    if leg_cap - leg_start <= near:
        # The second merge coincides with the first to within what the
        # continuation can resolve: phase 2 is treated as empty. This only
        # happens when an adjacent spoke ties the minimal one, so the
        # triangle has an interior Steiner point.
        r_min = min(si.spoke_lengths)
        knots = ((leg_start, theta0, beta0),)
        tie1 = abs(dist(p, t1) - leg_start) <= near
        tie2 = abs(dist(p, t2) - leg_start) <= near
        if tie1 and tie2:
            # Equilateral: everything merges at once, phase 3 is empty too.
            return _Phase2Plan(
                pinned_k, q1, q2, sigma, theta0, beta0, leg_start, leg_start,
                leg_cap, knots, beta0, q1, q2, t2, t.perimeter(),
            )
        merged_k, survivor_k = (q1, q2) if tie1 else (q2, q1)
        o = si.point
        sv = verts[survivor_k]
        mv = verts[merged_k]
        sp = dist(o, sv)
        anchor_end = Point(
            o.x + r_min * (sv.x - o.x) / sp, o.y + r_min * (sv.y - o.y) / sp
        )
        # The budget consumed at this configuration is reported from the
        # same coordinates the one-anchor continuation will start from, so
        # the two agree to rounding even when the tie is only approximate.
        l2 = (
            dist(p, mv)
            + dist(anchor_end, p)
            + dist(anchor_end, mv)
            + dist(anchor_end, sv)
        )
        l2 = max(l2, si.l_st + GROWTH_RATE * r_min)
        return _Phase2Plan(
            pinned_k, q1, q2, sigma, theta0, beta0, leg_start, leg_start, leg_cap,
            knots, beta0, merged_k, survivor_k, anchor_end, l2,
        )

    # The wide-case family starts at leg 0; the smallest solvable leg keeps
    # an absolute floor above the shortest ray angle evaluation accepts.
    leg_lo = leg_start if not wide else max(1e-10 * leg_cap, 2e-11)
    # Stop the 2x2 continuation just short of the cap, where the merging
    # anchor's terminal ray collapses and its residual goes stiff. The
    # stop-off keeps absolute floors: at a relative offset alone, a narrow
    # phase span or a tiny triangle would park the final knot on a ray too
    # short for the angle residuals to see.
    stop = max(1e-6 * (leg_cap - leg_lo), 1e-8 * scale, 1e-10)
    leg_hi = max(leg_lo, leg_cap - stop)
    knots = _phase2_march(sys2, leg_lo, theta0, beta0, leg_hi)

    # An anchor reaches its terminal exactly when the legs match that
    # adjacent side, so the shorter side merges first.
    leg_k, theta_k, beta_k = knots[-1]
    if abs(cap1 - cap2) <= near:
        # Both adjacent sides tie: the anchors land on their terminals
        # together and the one-anchor phase is empty.
        merged_k, survivor_k = q1, q2
        beta_end = 0.5 * angle_at(p, t1, t2)
        anchor_end = t2
        l2 = t.perimeter()
    else:
        merged_k = q1 if cap1 < cap2 else q2
        survivor_k = q2 if merged_k == q1 else q1
        n1, n2 = sys2.anchor_points(theta_k, beta_k)
        dm = dist(n1, t1) if merged_k == q1 else dist(n2, t2)
        ds = dist(n2, t2) if merged_k == q1 else dist(n1, t1)
        if dm > ds + 1e-6 * scale:
            raise RootFindingFailure("phase-2 merge bracketing failed")
        beta_end, anchor_end, l2 = _phase2_endpoint(
            t, pinned_k, q1, q2, sigma, leg_cap, beta_k, merged_k
        )
        if abs(l2 - sys2.total_length(theta_k, beta_k)) > 1e-2 * scale:
            raise RootFindingFailure("phase-2 endpoint inconsistent with continuation")
    return _Phase2Plan(
        pinned_k, q1, q2, sigma, theta0, beta0, leg_start, leg_lo, leg_cap,
        tuple(knots), beta_end, merged_k, survivor_k, anchor_end, l2,
    )


def _phase2_network(t: TerminalTriangle, plan: _Phase2Plan, n1: Point, n2: Point) -> Network:
    nodes = terminal_nodes(t) + (Node(3, "anchor", None, n1), Node(4, "anchor", None, n2))
    edges = (
        (plan.pinned_k, 3),
        (plan.pinned_k, 4),
        (3, 4),
        (plan.q1, 3),
        (plan.q2, 4),
    )
    return Network(t, nodes, edges)


def phase2_config(t: TerminalTriangle, pinned: str, leg: float) -> Network:
    """Two-anchor isosceles configuration at the given leg length.

    `pinned` must be the terminal the evolution actually pins for this
    triangle (the first merge); the valid leg bracket runs from the
    equilateral handoff (0 for wide triangles) to the shorter adjacent side.
    """
    thr = thresholds(t)
    plan = thr.plan
    if VERTEX_IDS.index(pinned) != plan.pinned_k:
        raise OutOfRange(f"the evolution pins terminal {VERTEX_IDS[plan.pinned_k]}, not {pinned}")
    if not (plan.leg_start - 1e-12 <= leg <= plan.leg_cap * (1.0 + 1e-12)):
        raise OutOfRange(f"leg must lie in [{plan.leg_start}, {plan.leg_cap}], got {leg}")
    leg = min(max(leg, plan.leg_lo), plan.leg_cap * (1.0 - 1e-9))
    sys2 = _Phase2System(t, plan.pinned_k, plan.q1, plan.q2, plan.sigma)
    _, theta, beta = _nearest_knot(plan.knots, leg)
    theta, beta = _phase2_solve_at_leg(sys2, leg, theta, beta)
    n1, n2 = sys2.anchor_points(theta, beta)
    return _phase2_network(t, plan, n1, n2)


# ---------------------------------------------------------------------------
# phase 3: one anchor, two pinned terminals


class _Phase3System:
    """Residuals for the single-anchor family: bisector at the anchor plus
    exact budget use.

    The iteration runs in a frame translated to the triangle centroid (see
    _Phase2System for why); callers convert the anchor with to_local and
    to_world at the boundary.
    """

    def __init__(self, t: TerminalTriangle, p1: int, p2: int, free: int):
        verts = t.vertices
        self.shift = Point(
            (verts[0].x + verts[1].x + verts[2].x) / 3.0,
            (verts[0].y + verts[1].y + verts[2].y) / 3.0,
        )
        self.p1 = self.to_local(verts[p1])
        self.p2 = self.to_local(verts[p2])
        self.f = self.to_local(verts[free])
        self.base = dist(self.p1, self.p2)
        self.scale = t.scale()
        self.budget = 0.0

    def to_local(self, q: Point) -> Point:
        return Point(q.x - self.shift.x, q.y - self.shift.y)

    def to_world(self, q: Point) -> Point:
        return Point(q.x + self.shift.x, q.y + self.shift.y)

    def residuals(self, x: float, y: float) -> tuple[float, float]:
        q = Point(x, y)
        r1 = bisector_residual(self.f, q, self.p1, self.p2)
        used = self.base + dist(q, self.p1) + dist(q, self.p2) + dist(q, self.f)
        # The length residual is scaled to stay commensurate with the angular one.
        r2 = (used - self.budget) / (1.0 + self.budget)
        return r1, r2

    def fd_steps(self, x: float, y: float) -> tuple[float, float]:
        q = Point(x, y)
        ray = min(dist(q, self.p1), dist(q, self.p2), dist(q, self.f))
        h = max(min(1e-7 * self.scale, 0.02 * ray), 1e-12 * self.scale)
        return h, h

    def tols(self, x: float, y: float) -> tuple[float, float]:
        # The bisector residual is noise-limited by the shortest incident
        # ray; the length residual is a clean sum and keeps a fixed floor.
        # Near the free terminal the objective is stationary in the anchor
        # position, so a loose angular tolerance costs only quadratic error.
        q = Point(x, y)
        ray_rel = min(dist(q, self.p1), dist(q, self.p2), dist(q, self.f)) / self.scale
        t1 = max(RESIDUAL_TOL, min(1e-4, 1e-13 / max(ray_rel, 1e-9)))
        t2 = max(RESIDUAL_TOL, 4e-14 * self.scale / (1.0 + self.budget))
        return t1, t2

    def contains(self, x: float, y: float, margin: float = 1e-7) -> bool:
        # The anchor curve runs from the merge point to the free terminal and
        # never leaves the triangle; points outside are spurious roots.
        verts = (self.p1, self.p2, self.f)
        a, b, c = verts
        area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
        s = 1.0 if area2 > 0.0 else -1.0
        m = margin * self.scale * self.scale
        for i in range(3):
            u, v = verts[i], verts[(i + 1) % 3]
            cr = (v.x - u.x) * (y - u.y) - (v.y - u.y) * (x - u.x)
            if s * cr < -m:
                return False
        return True


def _phase3_solve(sys3: _Phase3System, guess: Point, l_target: float, l_guess: float):
    """Solve the one-anchor system at budget l_target, warm-starting from a
    known root (guess, at budget l_guess).

    The root system degenerates as the anchor closes on the free terminal,
    so budgets in the last sliver before the endpoint are handled by
    interpolating between the last well-conditioned root and the exact
    endpoint configuration; the objective is stationary in the anchor
    position there, so the interpolation error only enters quadratically.
    """
    l_end = sys3.base + dist(sys3.p1, sys3.f) + dist(sys3.p2, sys3.f)
    cut = l_end - 1e-3 * (1.0 + l_end)
    if l_target > cut and l_target >= l_guess:
        q = guess if l_guess >= cut else _phase3_march(sys3, guess, cut, l_guess)
        return _phase3_endgame(sys3, q, l_target)
    return _phase3_march(sys3, guess, l_target, l_guess)


def _phase3_endgame(sys3: _Phase3System, q_from: Point, l_target: float):
    """Solve the last stretch before the anchor reaches the free terminal.

    In (x, y) the two residuals form a canyon whose width shrinks with the
    terminal ray, starving the finite-difference Newton. In polar
    coordinates centered on the free terminal the system splits: the ray
    fixes the budget and the bearing fixes the bisector residual, so the
    budget is bisected over the ray with a 1D bearing solve inside.
    """
    f_pt = sys3.f
    scale = sys3.scale
    s0 = dist(q_from, f_pt)
    state = {"psi": math.atan2(q_from.y - f_pt.y, q_from.x - f_pt.x)}

    def anchor(s: float, psi: float) -> Point:
        return Point(f_pt.x + s * math.cos(psi), f_pt.y + s * math.sin(psi))

    def solve_psi(s: float) -> float:
        if s < max(1e-11 * scale, 1e-11):
            # This close in the bearing no longer moves the length; freeze
            # it. The absolute floor keeps the ray above what angle
            # evaluation accepts at the smallest admissible triangle scales.
            return state["psi"]
        tol = max(RESIDUAL_TOL, min(1e-4, 1e-13 * scale / s))

        def res(psi: float) -> float:
            return bisector_residual(f_pt, anchor(s, psi), sys3.p1, sys3.p2)

        state["psi"] = _damped_newton1(res, state["psi"], 1e-8, tol=tol)
        return state["psi"]

    def length_at(s: float) -> tuple[float, Point]:
        q = anchor(s, solve_psi(s))
        used = sys3.base + dist(q, sys3.p1) + dist(q, sys3.p2) + dist(q, sys3.f)
        return used, q

    # Total length decreases as the ray grows, so bracket and bisect on s.
    lo, hi = 0.0, s0
    q = q_from
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        used, q = length_at(mid)
        if abs(used - l_target) <= 1e-13 * (1.0 + l_target):
            return q
        if used >= l_target:
            lo = mid
        else:
            hi = mid
    return q


def _phase3_march(sys3: _Phase3System, guess: Point, l_target: float, l_guess: float):
    """March the budget from l_guess to l_target, Newton-correcting at each step."""
    x, y = guess.x, guess.y
    l_cur = l_guess
    span = abs(l_target - l_guess)
    if span == 0.0:
        span = 1.0
    # Small budget steps keep each warm start inside the Newton basin; a
    # single leap can overshoot past the free terminal onto a spurious root.
    step_cap = min(span, 0.05 * sys3.scale)
    step = step_cap
    max_move = 0.1 * sys3.scale
    # Budget at which the anchor reaches the free terminal. The anchor ray
    # shrinks roughly linearly in (l_end - L) and the Newton basin shrinks
    # with the ray, so forward steps take at most a quarter of the distance
    # still separating the budget from that endpoint.
    l_end = sys3.base + dist(sys3.p1, sys3.f) + dist(sys3.p2, sys3.f)
    remaining = l_target - l_cur
    while True:
        if remaining == 0.0:
            return Point(x, y)
        allowed = step
        if remaining > 0.0:
            allowed = min(allowed, max(0.25 * (l_end - l_cur), 1e-12))
        take = math.copysign(min(allowed, abs(remaining)), remaining)
        sys3.budget = l_cur + take
        try:
            xn, yn = _damped_newton2(
                sys3.residuals, x, y, sys3.fd_steps, sys3.tols, max_step=max_move
            )
            if not sys3.contains(xn, yn):
                raise RootFindingFailure("one-anchor solve left the triangle")
        except RootFindingFailure:
            # Halve the attempted take itself: a fixed cap on `step` may not
            # have been the binding limit.
            step = 0.5 * abs(take)
            if step < max(1e-13, 1e-10 * span):
                raise
            remaining = l_target - l_cur
            continue
        x, y, l_cur = xn, yn, l_cur + take
        remaining = l_target - l_cur
        step = min(step_cap, 2.0 * step)


def _phase3_network(t: TerminalTriangle, p1: int, p2: int, free: int, q: Point) -> Network:
    nodes = terminal_nodes(t) + (Node(3, "anchor", None, q),)
    edges = ((p1, p2), (p1, 3), (p2, 3), (free, 3))
    return Network(t, nodes, edges)


def phase3_config(t: TerminalTriangle, pinned_pair: tuple[str, str], guess: Point, L: float) -> Network:
    """Single-anchor configuration spending exactly L.

    The anchor solves {terminal edge bisects the angle to the pinned pair,
    total length = L}; the network keeps the pinned pair's side as an edge.
    """
    thr = thresholds(t)
    ks = tuple(sorted(VERTEX_IDS.index(v) for v in pinned_pair))
    expected = tuple(sorted((thr.plan.pinned_k, thr.plan.merged2_k)))
    if ks != expected:
        raise OutOfRange(
            f"the evolution pins terminals {tuple(VERTEX_IDS[k] for k in expected)}"
        )
    if not (thr.l2 - 1e-9 <= L <= thr.l3 + 1e-9):
        raise OutOfRange(f"L must lie in [{thr.l2}, {thr.l3}], got {L}")
    free = thr.plan.survivor_k
    sys3 = _Phase3System(t, ks[0], ks[1], free)
    if L >= thr.l3 - 1e-12 * (1.0 + thr.l3):
        return _phase3_network(t, ks[0], ks[1], free, t.vertices[free])
    # The caller's guess anchors the continuation; assume it sits on the
    # solution curve near some budget and walk the budget to L.
    g = sys3.to_local(guess)
    l_guess = sys3.base + dist(g, sys3.p1) + dist(g, sys3.p2) + dist(g, sys3.f)
    q = _phase3_solve(sys3, g, L, l_guess)
    return _phase3_network(t, ks[0], ks[1], free, sys3.to_world(q))


# ---------------------------------------------------------------------------
# thresholds and solve


def thresholds(t: TerminalTriangle) -> Thresholds:
    """All phase boundaries for t, including the phase-2 continuation data."""
    cls = classify(t)
    si = steiner_info(t, cls)
    sides = t.side_lengths()
    l_min_edge = min(sides)
    l3 = t.perimeter()

    if cls.is_interior:
        r_min = min(si.spoke_lengths)
        pinned_k = si.spoke_lengths.index(r_min)
        l1 = si.l_st + GROWTH_RATE * r_min
        plan = _build_plan(t, si, pinned_k, wide=False)
    else:
        pinned_k = VERTEX_IDS.index(cls.wide_vertex)
        l1 = None
        plan = _build_plan(t, si, pinned_k, wide=True)

    third_k = plan.survivor_k
    merge_order = (
        VERTEX_IDS[pinned_k],
        VERTEX_IDS[plan.merged2_k],
        VERTEX_IDS[third_k],
    )
    l2 = plan.l2
    lo = l1 if l1 is not None else si.l_st
    scale = t.scale()
    tol = 1e-7 * scale
    if not (l_min_edge <= si.l_st + tol and si.l_st <= lo + tol and lo <= l2 + tol and l2 <= l3 + tol):
        raise RootFindingFailure(
            f"threshold ordering violated: {l_min_edge}, {si.l_st}, {l1}, {l2}, {l3}"
        )
    return Thresholds(l_min_edge, si.l_st, l1, l2, l3, si, merge_order, plan)


def _steiner_network(t: TerminalTriangle, si: SteinerInfo) -> Network:
    if si.kind == "interior":
        nodes = terminal_nodes(t) + (Node(3, "anchor", None, si.point),)
        return Network(t, nodes, ((0, 3), (1, 3), (2, 3)))
    k = VERTEX_IDS.index(si.at_vertex)
    q1, q2 = [i for i in range(3) if i != k]
    return Network(t, terminal_nodes(t), ((k, q1), (k, q2)))


def _shortest_side_network(t: TerminalTriangle) -> tuple[Network, str]:
    sides = t.side_lengths()
    pairs = ((0, 1), (1, 2), (0, 2))
    names = ("ab", "bc", "ac")
    k = sides.index(min(sides))
    return Network(t, terminal_nodes(t), (pairs[k],)), names[k]


def _complete_network(t: TerminalTriangle) -> Network:
    return Network(t, terminal_nodes(t), ((0, 1), (1, 2), (0, 2)))


def _result(t, network, phase, slope) -> SolveResult:
    return SolveResult(network, phase, total_length(network), evaluate(network), slope)


def _initial_wide_alpha(t: TerminalTriangle, plan: _Phase2Plan) -> float:
    wide = angle_at(t.vertices[plan.pinned_k], t.vertices[plan.q1], t.vertices[plan.q2])
    return math.pi / 2.0 - wide / 2.0


def solve(t: TerminalTriangle, L: float, thr: Thresholds | None = None) -> SolveResult:
    """Optimal network, phase, objective and one-sided slope at budget L."""
    if not (L > 0.0) or not math.isfinite(L):
        raise OutOfRange(f"budget must be positive and finite, got {L}")
    if thr is None:
        thr = thresholds(t)
    si = thr.steiner
    eps = 1e-12 * (1.0 + thr.l3)
    interior = si.kind == "interior"

    if abs(L - thr.l_st) <= eps:
        slope = slope_at(math.pi / 6.0) if interior else slope_at(_initial_wide_alpha(t, thr.plan))
        return _result(t, _steiner_network(t, si), Phase("steiner_tree"), slope)

    if L < thr.l_min_edge:
        network = Network(t, terminal_nodes(t), ())
        return _result(t, network, Phase("below_tree", edges=()), 0.0)

    if L < thr.l_st:
        network, side = _shortest_side_network(t)
        return _result(t, network, Phase("below_tree", edges=(side,)), 0.0)

    if L >= thr.l3 - eps:
        return _result(t, _complete_network(t), Phase("complete"), 0.0)

    if interior and L < thr.l1:
        r = (L - thr.l_st) / GROWTH_RATE
        network = phase1_config(t, r)
        return _result(t, network, Phase("three_anchor"), slope_at(math.pi / 6.0))

    plan = thr.plan
    if L < thr.l2:
        network, beta = _solve_phase2_budget(t, plan, L)
        alpha = math.pi / 4.0 - beta / 2.0
        phase = Phase("two_anchor", pinned=VERTEX_IDS[plan.pinned_k])
        result = _result(t, network, phase, slope_at(alpha))
    else:
        p1, p2 = sorted((plan.pinned_k, plan.merged2_k))
        sys3 = _Phase3System(t, p1, p2, plan.survivor_k)
        q_loc = _phase3_solve(sys3, sys3.to_local(plan.anchor_end), L, thr.l2)
        q = sys3.to_world(q_loc)
        network = _phase3_network(t, p1, p2, plan.survivor_k, q)
        two_alpha = angle_at(q_loc, sys3.p1, sys3.p2)
        pair = (VERTEX_IDS[p1], VERTEX_IDS[p2])
        result = _result(t, network, Phase("one_anchor", pair=pair), slope_at(two_alpha / 2.0))

    if abs(result.l_used - L) > 1e-7 * (1.0 + L):
        raise RootFindingFailure(
            f"budget not spent exactly: used {result.l_used} of {L}"
        )
    return result


def _phase2_blend(t: TerminalTriangle, plan: _Phase2Plan, sys2, L: float,
                  theta_hi: float, beta_hi: float, len_hi: float):
    """Configurations between the last solvable leg and the exact merge point.

    The remaining leg span is about 1e-6 of the cap, so linear interpolation
    of the anchor positions stays on the solution curve to far below every
    length and angle tolerance; only the budget equation is re-solved.
    """
    n1_hi, n2_hi = sys2.anchor_points(theta_hi, beta_hi)
    verts = t.vertices
    if plan.merged2_k == plan.q1:
        n1_end, n2_end = verts[plan.merged2_k], plan.anchor_end
    else:
        n1_end, n2_end = plan.anchor_end, verts[plan.merged2_k]
    p = verts[plan.pinned_k]
    t1, t2 = verts[plan.q1], verts[plan.q2]

    def config(f: float):
        n1 = Point(n1_hi.x + f * (n1_end.x - n1_hi.x), n1_hi.y + f * (n1_end.y - n1_hi.y))
        n2 = Point(n2_hi.x + f * (n2_end.x - n2_hi.x), n2_hi.y + f * (n2_end.y - n2_hi.y))
        total = (
            dist(p, n1) + dist(p, n2) + dist(n1, n2) + dist(n1, t1) + dist(n2, t2)
        )
        return n1, n2, total

    lo_f, hi_f = 0.0, 1.0
    f = min(1.0, max(0.0, (L - len_hi) / max(plan.l2 - len_hi, 1e-300)))
    for _ in range(100):
        n1, n2, total = config(f)
        if abs(total - L) <= 1e-13 * (1.0 + L):
            break
        if total < L:
            lo_f = f
        else:
            hi_f = f
        f = 0.5 * (lo_f + hi_f)
    beta = beta_hi + f * (plan.beta_end - beta_hi)
    return _phase2_network(t, plan, n1, n2), beta


def _solve_phase2_budget(t: TerminalTriangle, plan: _Phase2Plan, L: float):
    """Invert total length over leg by bisection (length is increasing in leg)."""
    sys2 = _Phase2System(t, plan.pinned_k, plan.q1, plan.q2, plan.sigma)
    solved = list(plan.knots)

    def at(leg: float):
        _, theta, beta = _nearest_knot(solved, leg)
        theta, beta = _phase2_solve_at_leg(sys2, leg, theta, beta)
        solved.append((leg, theta, beta))
        return theta, beta, sys2.total_length(theta, beta)

    def network_at(leg: float, theta: float, beta: float):
        sys2.leg = leg
        n1, n2 = sys2.anchor_points(theta, beta)
        return _phase2_network(t, plan, n1, n2), beta

    # Endpoint legs reuse the marched roots as-is: re-solving them would
    # re-evaluate residuals at configurations the continuation already
    # polished, and at a tie plan's single knot the merged anchor sits on
    # its terminal where those residuals are not even computable.
    lo, theta, beta = plan.knots[0]
    sys2.leg = lo
    len_lo = sys2.total_length(theta, beta)
    if len_lo >= L:
        # Budget barely above the Steiner tree in the wide case: the smallest
        # solvable leg already overshoots by a sub-tolerance amount.
        return network_at(lo, theta, beta)
    hi, theta_hi, beta_hi = plan.knots[-1]
    sys2.leg = hi
    len_hi = sys2.total_length(theta_hi, beta_hi)
    if L > len_hi:
        return _phase2_blend(t, plan, sys2, L, theta_hi, beta_hi, len_hi)
    length_tol = 1e-12 * (1.0 + L)
    mid, len_mid = lo, len_lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        theta, beta, len_mid = at(mid)
        if abs(len_mid - L) <= length_tol:
            break
        if len_mid < L:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16 * (1.0 + hi):
            break
    return network_at(mid, theta, beta)
