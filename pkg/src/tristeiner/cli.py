"""Command-line front end: solve, sweep, and verify.

Exit codes: 0 success, 1 malformed input or usage, 2 rejected geometry,
3 solver failure, 4 verification gap. Every failure prints a one-line
diagnostic to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import analytic, evolve, oracle
from .errors import (
    DegenerateGeometry,
    NoConvergence,
    OutOfRange,
    RootFindingFailure,
    TristeinerError,
)
from .fileio import dump_json, load_problem, solution_payload, sweep_csv
from .network import evaluate
from .rendering import curve_svg, network_svg

# Verification accepts the oracle landing in this band around the closed form:
# meaningfully below means the "optimal" network was beaten, far above means
# the search failed.
GAP_LO = -1e-6
GAP_HI = 1e-3

# Oracle shapes that can realize each phase's optimum (the Steiner tree is the
# collapse limit of every anchored family).
_COMPATIBLE = {
    "below_tree": ("edge_subset",),
    "steiner_tree": ("three_anchor", "two_anchor", "one_anchor"),
    "three_anchor": ("three_anchor",),
    "two_anchor": ("two_anchor",),
    "one_anchor": ("one_anchor",),
    "complete": ("edge_subset",),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_solve(args) -> int:
    t, file_budget, penalty = load_problem(_read(args.spec))
    budget = args.budget if args.budget is not None else file_budget
    if budget is None:
        raise _UsageError("no budget given: pass --budget or put one in the problem file")
    result = analytic.solve(t, budget)
    payload = solution_payload(t, result)
    if penalty is not None:
        obj = evaluate(result.network, penalty)
        payload["j"] = obj.j
        payload["objective"] = {"d_ab": obj.d_ab, "d_bc": obj.d_bc, "d_ac": obj.d_ac}
    _write(args.out, dump_json(payload))
    if args.image:
        _write(args.image, network_svg(result.network))
    return 0


def cmd_sweep(args) -> int:
    t, _, _ = load_problem(_read(args.spec))
    trace = evolve.sweep(t, args.l_from, args.l_to, args.samples)
    _write(args.out, sweep_csv(trace))
    if args.curve_image:
        _write(args.curve_image, curve_svg(trace))
    return 0


def cmd_verify(args) -> int:
    t, _, _ = load_problem(_read(args.spec))
    budgets = [float(s) for s in args.budgets.split(",") if s.strip()]
    if not budgets:
        raise _UsageError("--budgets must list at least one budget")
    thr = analytic.thresholds(t)
    print(
        "%14s %22s %22s %12s %s"
        % ("budget", "j_analytic", "j_oracle", "gap", "topology")
    )
    all_ok = True
    for budget in budgets:
        res = analytic.solve(t, budget, thr)
        orc = oracle.solve(t, budget, args.seed)
        gap = orc.j - res.objective.j
        # The oracle labels results by the shape family it searched, but its
        # collapse pass can simplify the winner (a two-anchor search ending
        # on the complete triangle, say), so structural agreement accepts
        # either a compatible family label or a collapsed winner with the
        # same anchor and edge counts as the analytic network.
        agree = orc.topology.tag in _COMPATIBLE[res.phase.tag] or (
            len(orc.best.anchors) == len(res.network.anchors)
            and len(orc.best.edges) == len(res.network.edges)
        )
        ok = GAP_LO <= gap <= GAP_HI
        all_ok = all_ok and ok
        print(
            "%14.8g %22.16g %22.16g %12.3e %s/%s %s %s"
            % (
                budget,
                res.objective.j,
                orc.j,
                gap,
                res.phase.tag,
                orc.topology.tag,
                "match" if agree else "differ",
                "ok" if ok else "GAP",
            )
        )
    return 0 if all_ok else 4


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tristeiner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal network for one budget")
    p.add_argument("--spec", required=True, help="problem file (JSON)")
    p.add_argument("--budget", type=float, default=None, help="length budget")
    p.add_argument("--out", required=True, help="solution file to write (JSON)")
    p.add_argument("--image", default=None, help="optional network picture (SVG)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="J(L) table over a budget range")
    p.add_argument("--spec", required=True, help="problem file (JSON)")
    p.add_argument("--from", dest="l_from", type=float, required=True, help="range start")
    p.add_argument("--to", dest="l_to", type=float, required=True, help="range end")
    p.add_argument("--samples", type=int, required=True, help="uniform sample count")
    p.add_argument("--out", required=True, help="table file to write (CSV)")
    p.add_argument("--curve-image", default=None, help="optional curve picture (SVG)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-check the closed form against the search")
    p.add_argument("--spec", required=True, help="problem file (JSON)")
    p.add_argument("--budgets", required=True, help="comma-separated budgets")
    p.add_argument("--seed", type=int, default=0, help="search seed")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DegenerateGeometry as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RootFindingFailure, NoConvergence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TristeinerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
