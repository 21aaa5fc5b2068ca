"""Problem and result files: JSON documents and CSV curve tables.

Floats are always written with 17 significant digits, which round-trips
every double exactly, and negative zero is normalized so that equal values
serialize to equal bytes.
"""

from __future__ import annotations

import json
import math

from .analytic import SolveResult
from .evolve import EvolutionTrace
from .geom import Point, TerminalTriangle
from .network import Network, Node, terminal_nodes


def _fmt(x: float) -> str:
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return "%.17g" % x


def _emit(value, out: list[str]) -> None:
    if isinstance(value, bool) or value is None:
        out.append("true" if value is True else "false" if value is False else "null")
    elif isinstance(value, float):
        out.append(_fmt(value))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, dict):
        out.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(k))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    else:
        out.append("[")
        for i, v in enumerate(value):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")


def dump_json(value) -> str:
    """Deterministic JSON text: insertion-ordered keys, %.17g floats."""
    out: list[str] = []
    _emit(value, out)
    out.append("\n")
    return "".join(out)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def load_problem(text: str) -> tuple[TerminalTriangle, float | None, float | None]:
    """Parse a problem document: terminals, optional budget and penalty.

    Raises ValueError for structural problems; triangle construction raises
    DegenerateGeometry for collinear or duplicate terminals.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("problem document must be a JSON object")
    terms = doc.get("terminals")
    if (
        not isinstance(terms, list)
        or len(terms) != 3
        or any(not isinstance(p, list) or len(p) != 2 for p in terms)
    ):
        raise ValueError("'terminals' must be three [x, y] pairs")
    pts = []
    for p in terms:
        x, y = p
        if not (_is_num(x) and _is_num(y)):
            raise ValueError(f"terminal coordinates must be finite numbers, got {p}")
        pts.append(Point(float(x), float(y)))

    budget = doc.get("budget")
    if budget is not None:
        if not _is_num(budget) or not budget > 0:
            raise ValueError(f"'budget' must be a positive number, got {budget!r}")
        budget = float(budget)
    penalty = doc.get("penalty")
    if penalty is not None:
        if not _is_num(penalty) or not penalty > 0:
            raise ValueError(f"'penalty' must be a positive number, got {penalty!r}")
        penalty = float(penalty)

    return TerminalTriangle(pts[0], pts[1], pts[2]), budget, penalty


def solution_payload(t: TerminalTriangle, result: SolveResult) -> dict:
    """SolveResult as a plain document: enough to rebuild and re-score."""
    phase: dict = {"tag": result.phase.tag}
    if result.phase.pinned is not None:
        phase["pinned"] = result.phase.pinned
    if result.phase.pair is not None:
        phase["pair"] = list(result.phase.pair)
    if result.phase.edges is not None:
        phase["edges"] = list(result.phase.edges)
    return {
        "terminals": [[v.x, v.y] for v in t.vertices],
        "phase": phase,
        "l_used": result.l_used,
        "j": result.objective.j,
        "slope": result.slope,
        "objective": {
            "d_ab": result.objective.d_ab,
            "d_bc": result.objective.d_bc,
            "d_ac": result.objective.d_ac,
        },
        "nodes": [
            {"id": n.id, "kind": n.kind, "label": n.label, "x": n.pos.x, "y": n.pos.y}
            for n in result.network.nodes
        ],
        "edges": [list(e) for e in result.network.edges],
    }


def network_from_payload(doc: dict) -> Network:
    """Rebuild the network of a solution document (round-trip support)."""
    pts = [Point(float(p[0]), float(p[1])) for p in doc["terminals"]]
    t = TerminalTriangle(pts[0], pts[1], pts[2])
    nodes = terminal_nodes(t)
    for n in doc["nodes"]:
        if n["kind"] == "anchor":
            nodes = nodes + (
                Node(int(n["id"]), "anchor", None, Point(float(n["x"]), float(n["y"]))),
            )
    edges = tuple((int(u), int(v)) for u, v in doc["edges"])
    return Network(t, nodes, edges)


def sweep_csv(trace: EvolutionTrace) -> str:
    """The J(L) table: one row per sample, header l,j,phase,slope."""
    lines = ["l,j,phase,slope"]
    for s in trace.samples:
        lines.append(
            "%s,%s,%s,%s" % (_fmt(s.l), _fmt(s.j), s.phase.tag, _fmt(s.slope))
        )
    return "\n".join(lines) + "\n"
