"""Budget sweeps: the J(L) curve, its breakpoints, and network snapshots.

Every sample is solved independently from the threshold data, never from a
neighboring sample, so a sweep is a deterministic ordered merge and the
result does not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import Phase, SolveResult, Thresholds, solve, thresholds
from .errors import OutOfRange, TristeinerError
from .geom import TerminalTriangle
from .network import Network


@dataclass(frozen=True)
class SweepSample:
    l: float
    j: float
    phase: Phase
    slope: float


@dataclass(frozen=True)
class EvolutionTrace:
    thresholds: Thresholds
    samples: list[SweepSample]
    snapshots: list[tuple[float, Network]]


def breakpoints(t: TerminalTriangle) -> Thresholds:
    """Budget thresholds where the optimal network changes character."""
    return thresholds(t)


def _solve_at(t: TerminalTriangle, l: float, thr: Thresholds) -> SolveResult:
    try:
        return solve(t, l, thr)
    except TristeinerError as exc:
        raise type(exc)(f"sweep sample at budget {l!r}: {exc}") from exc


def sweep(t: TerminalTriangle, l_from: float, l_to: float, n: int) -> EvolutionTrace:
    """n uniform samples of J(L) over [l_from, l_to], thresholds spliced in.

    Threshold budgets inside the range are always sampled exactly, even when
    they fall off the uniform grid, and each threshold contributes a network
    snapshot. Samples come back sorted by budget.
    """
    if not (math.isfinite(l_from) and math.isfinite(l_to) and l_from < l_to):
        raise OutOfRange(f"need l_from < l_to, got [{l_from}, {l_to}]")
    if n < 2:
        raise OutOfRange(f"need at least 2 samples, got {n}")

    thr = thresholds(t)
    span = l_to - l_from
    grid = [l_from + span * i / (n - 1) for i in range(n)]
    grid[-1] = l_to

    marks = [thr.l_min_edge, thr.l_st, thr.l1, thr.l2, thr.l3]
    cuts = []
    for m in marks:
        if m is not None and l_from <= m <= l_to and m not in cuts:
            cuts.append(m)

    # A threshold within float noise of a grid point (or of another
    # threshold) is already sampled; splicing it again would add a
    # near-duplicate budget whose phase sits on the far side of the cut.
    spliced = []
    for m in cuts:
        tol = 1e-9 * (1.0 + abs(m))
        if all(abs(g - m) > tol for g in grid) and all(
            abs(s - m) > tol for s in spliced
        ):
            spliced.append(m)

    budgets = sorted(set(grid) | set(spliced))
    results = {l: _solve_at(t, l, thr) for l in budgets}

    samples = [
        SweepSample(l, results[l].objective.j, results[l].phase, results[l].slope)
        for l in budgets
    ]
    # Snapshots always sit at the exact threshold, spliced or not.
    snapshots = []
    for m in cuts:
        r = results.get(m)
        if r is None:
            r = _solve_at(t, m, thr)
        snapshots.append((m, r.network))
    return EvolutionTrace(thr, samples, snapshots)
