"""Command-line front end.

Prints one JSON document on standard output; diagnostics go to standard
error.  Exit status: 0 success, 1 invalid input, 2 solver guard or
invariant failure, 3 disagreement with the brute-force oracles.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .exactlp import format_rational
from .games import (
    GameError,
    PayoffTotalError,
    SizeGuardError,
    brute_least_core,
    brute_nucleolus,
    core_status,
    cs_core_membership,
    cs_core_witness,
    flow_game,
    hull_membership,
    make_game,
    player_min_cut,
)
from .network import DEFAULT_PATH_BUDGET, NetworkError, PathBudgetExceeded, load_network
from .solutions import (
    GENERATE,
    MODES,
    InvariantBreach,
    flow_nucleolus,
    least_core,
    nucleolus,
)

VERBS = ("core", "cs-core", "least-core", "nucleolus", "flow-nucleolus", "check")

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_MISMATCH = 0, 1, 2, 3


class Mismatch(Exception):
    def __init__(self, doc: dict):
        super().__init__("result disagrees with the brute-force oracle")
        self.doc = doc


def _payoff(x) -> dict[str, str]:
    return {p: format_rational(Fraction(v)) for p, v in x.items()}


def _diff(ours, brute) -> dict:
    return {p: {"solver": format_rational(ours[p]), "brute": format_rational(brute[p])}
            for p in ours if ours[p] != brute[p]}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathgames", description="Exact solution concepts for path cooperative games.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--game", choices=("edge", "vertex"), default="edge",
                        help="players are edges or internal vertices (ignored by flow-nucleolus)")
    parser.add_argument("--input", required=True, help="network JSON file")
    parser.add_argument("--mode", choices=MODES, default=GENERATE)
    parser.add_argument("--brute-check", action="store_true", help="cross-check against the brute-force oracles")
    parser.add_argument("--trace", action="store_true", help="include the sequential-program trace")
    parser.add_argument("--path-budget", type=int, default=DEFAULT_PATH_BUDGET)
    return parser


def _core(g, args) -> dict:
    st = core_status(g)
    doc = {"core": "nonempty" if st.nonempty else "empty", "min_cut_size": st.min_cut_size,
           "veto": list(st.veto)}
    if st.nonempty:
        doc["nucleolus"] = _payoff(st.nucleolus)
        if args.brute_check:
            brute = brute_nucleolus(g)
            if brute != st.nucleolus:
                raise Mismatch({**doc, "diff": _diff(st.nucleolus, brute)})
    return doc


def _cs_core(g, args) -> dict:
    cut = player_min_cut(g)
    vertex = {p: Fraction(int(p in cut)) for p in g.players}
    if not cs_core_membership(g, vertex):
        raise InvariantBreach("a minimum-cut indicator failed the CS-core test")
    doc = {"cs_core": {"f_star": g.f_star, "min_cut": list(cut), "payoff": _payoff(vertex),
                       "structure": [list(part) for part in cs_core_witness(g, vertex)]}}
    if args.brute_check and not hull_membership(g, vertex):
        raise Mismatch({**doc, "agreement": False})
    return doc


def _least_core(g, args) -> dict:
    if g.f_star == 1:
        st = core_status(g)
        return {"core": "nonempty", "epsilon": "0", "f_star": 1, "witness": _payoff(st.nucleolus)}
    res = least_core(g, args.mode, args.path_budget)
    doc = {"core": "empty", **res.to_dict()}
    if args.brute_check:
        eps, _ = brute_least_core(g)
        if eps != res.epsilon:
            raise Mismatch({**doc, "brute_epsilon": format_rational(eps)})
    return doc


def _nucleolus(g, args) -> dict:
    x, state = nucleolus(g, args.mode, args.path_budget)
    doc = {"nucleolus": _payoff(x)}
    if args.trace:
        doc["trace"] = state.to_list()
    if args.brute_check:
        brute = brute_nucleolus(g)
        if brute != x:
            raise Mismatch({**doc, "diff": _diff(x, brute)})
    return doc


def _flow_nucleolus(net, args) -> dict:
    g = flow_game(net)
    x = flow_nucleolus(g, args.path_budget)
    doc = {"flow_nucleolus": _payoff(x)}
    if args.brute_check:
        brute = brute_nucleolus(g)
        if brute != x:
            raise Mismatch({**doc, "diff": _diff(x, brute)})
    return doc


def _check(g, args) -> dict:
    x, _ = nucleolus(g, args.mode, args.path_budget)
    brute = brute_nucleolus(g)
    diff = _diff(x, brute)
    doc: dict = {"agreement": not diff}
    if g.f_star > 1:
        eps, _ = brute_least_core(g)
        ours = least_core(g, args.mode, args.path_budget).epsilon
        if eps != ours:
            diff["epsilon"] = {"solver": format_rational(ours), "brute": format_rational(eps)}
    if diff:
        raise Mismatch({"agreement": False, "diff": diff})
    return doc


def run(args: argparse.Namespace) -> tuple[int, dict]:
    """Execute a parsed command; returns ``(exit status, document)``."""
    try:
        net = load_network(args.input)
        if args.path_budget < 1:
            raise ValueError("--path-budget must be positive")
        if args.verb == "flow-nucleolus":
            return EXIT_OK, _flow_nucleolus(net, args)
        g = make_game(net, args.game)
        handler = {"core": _core, "cs-core": _cs_core, "least-core": _least_core,
                   "nucleolus": _nucleolus, "check": _check}[args.verb]
        return EXIT_OK, handler(g, args)
    except Mismatch as m:
        return EXIT_MISMATCH, m.doc
    except (PathBudgetExceeded, SizeGuardError, InvariantBreach) as e:
        return EXIT_SOLVER, {"error": str(e)}
    except (OSError, NetworkError, GameError, PayoffTotalError, ValueError) as e:
        return EXIT_INPUT, {"error": str(e)}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    status, doc = run(args)
    if "error" in doc:
        print(f"pathgames: {doc['error']}", file=sys.stderr)
    print(json.dumps(doc))
    return status


if __name__ == "__main__":
    sys.exit(main())
