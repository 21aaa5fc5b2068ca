"""Budget-constrained optimal networks over three terminals.

Given terminals A, B, C and a length budget L, the package computes the
network minimizing the sum of the three pairwise shortest-path distances
subject to the total edge length staying within L, tracks how that optimum
evolves as the budget grows from the Steiner tree to the complete triangle,
and cross-checks the closed forms against a search that knows none of them.

    from tristeiner import TerminalTriangle, Point, solve

    t = TerminalTriangle(Point(0, 0), Point(4, 0), Point(1, 3))
    result = solve(t, 8.0)
    result.objective.j, result.phase.tag
"""

from .analytic import Phase, SolveResult, Thresholds, slope_at, solve, thresholds
from .errors import (
    DegenerateGeometry,
    NoConvergence,
    OutOfRange,
    RootFindingFailure,
    TristeinerError,
)
from .evolve import EvolutionTrace, SweepSample, breakpoints, sweep
from .fermat import SteinerInfo, steiner_info
from .geom import Point, TerminalTriangle, classify
from .network import Network, Node, Objective, Violation, evaluate, total_length, validate
from .oracle import OracleResult, TopologyId, optimize_topology, topology_census

# the oracle's entry point, under a name that does not shadow the solver's
from .oracle import solve as oracle_solve

__version__ = "0.1.0"

__all__ = [
    "DegenerateGeometry",
    "EvolutionTrace",
    "Network",
    "NoConvergence",
    "Node",
    "Objective",
    "OracleResult",
    "OutOfRange",
    "Phase",
    "Point",
    "RootFindingFailure",
    "SolveResult",
    "SteinerInfo",
    "SweepSample",
    "TerminalTriangle",
    "Thresholds",
    "TopologyId",
    "TristeinerError",
    "Violation",
    "breakpoints",
    "classify",
    "evaluate",
    "optimize_topology",
    "oracle_solve",
    "slope_at",
    "solve",
    "steiner_info",
    "sweep",
    "thresholds",
    "topology_census",
    "total_length",
    "validate",
]
