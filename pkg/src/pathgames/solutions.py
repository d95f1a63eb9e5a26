"""Least core and nucleolus of path games without listing coalitions.

Both solvers work on the game's arena with one LP variable per player and
one constraint per source-sink path (identified by its player set).  In
``"enumerate"`` mode every path is present from the start; in
``"generate"`` mode the program begins with the paths of a maximum-flow
decomposition and grows through a separation oracle, a bounded
shortest-path search under the current payoffs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import exactlp as lp_
from .exactlp import EQ, GE, LinearProgram, RowSpace, format_rational
from .games import (
    EDGE,
    FLOW,
    GameError,
    GameInstance,
    Payoff,
    PayoffTotalError,
    core_status,
    cs_core_membership,
    flow_game,
)
from .network import (
    DEFAULT_PATH_BUDGET,
    PathBudgetExceeded,
    enumerate_paths,
    max_flow,
    paths_within,
    shortest_path_oracle,
)

ENUMERATE = "enumerate"
GENERATE = "generate"
MODES = (ENUMERATE, GENERATE)


class CoreNonempty(GameError):
    """The least core was requested for a game whose core is nonempty."""


class InvariantBreach(AssertionError):
    """A property the algorithms guarantee did not hold."""


@dataclass(frozen=True)
class LeastCoreResult:
    epsilon: Fraction
    witness: Payoff
    f_star: int

    def to_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "f_star": self.f_star,
            "witness": {p: format_rational(v) for p, v in self.witness.items()},
        }


@dataclass(frozen=True)
class SlpRound:
    epsilon: Fraction
    fixed_players: tuple[tuple[str, Fraction], ...]
    fixed_paths: tuple[tuple[tuple[str, ...], Fraction], ...]
    pool_size: int

    def to_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "fixed_players": {p: format_rational(v) for p, v in self.fixed_players},
            "fixed_paths": [{"path": list(path), "value": format_rational(v)} for path, v in self.fixed_paths],
            "pool_size": self.pool_size,
        }


@dataclass
class SlpState:
    """Progress of the sequential programs: one :class:`SlpRound` per solved program."""
    rounds: list[SlpRound] = field(default_factory=list)
    fixed_players: dict[str, Fraction] = field(default_factory=dict)
    fixed_paths: dict[tuple[str, ...], Fraction] = field(default_factory=dict)
    pool: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.rounds)

    @property
    def epsilons(self) -> list[Fraction]:
        return [r.epsilon for r in self.rounds]

    def to_list(self) -> list[dict]:
        return [r.to_dict() for r in self.rounds]


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, not {mode!r}")


class _Paths:
    """Path constraints keyed by player bitmask, with arena bookkeeping."""

    def __init__(self, g: GameInstance, budget: int):
        self.g = g
        self.budget = budget
        self.owner = {e: i for i, e in enumerate(g.player_edges)}

    def mask(self, path) -> int:
        m = 0
        for eid in path:
            i = self.owner.get(eid)
            if i is not None:
                m |= 1 << i
        return m

    def weights(self, x) -> dict[str, Fraction]:
        return {e: x[i] for i, e in enumerate(self.g.player_edges)}

    def all_masks(self) -> list[int]:
        seen: dict[int, None] = {}
        for p in enumerate_paths(self.g.arena, self.budget):
            seen.setdefault(self.mask(p))
        return list(seen)

    def flow_masks(self) -> list[int]:
        return list(dict.fromkeys(self.mask(p) for p in max_flow(self.g.arena).paths))

    def label(self, m: int) -> tuple[str, ...]:
        """Players of the lexicographically least arena path with player set ``m``, in path order."""
        usable = self.g.arena_edges(m)
        for p in paths_within(self.g.arena, {}, Fraction(1), usable=usable):
            if self.mask(p) == m:
                return tuple(self.g.players[self.owner[e]] for e in p if e in self.owner)
        raise InvariantBreach(f"no arena path realises player set {self.g.members(m)}")


def _indicator(m: int, n: int) -> list[Fraction]:
    return [Fraction(m >> i & 1) for i in range(n)]


def _require_path_game(g: GameInstance) -> None:
    if not g.is_path_game:
        raise GameError("this operation needs a path game (edge or vertex)")


# --------------------------------------------------------------------------
# least core


def least_core(g: GameInstance, mode: str = GENERATE, path_budget: int = DEFAULT_PATH_BUDGET) -> LeastCoreResult:
    """Maximise ``eps`` subject to ``x(N) = 1``, ``x >= 0`` and ``x(P) >= 1 + eps`` for every path ``P``."""
    _require_path_game(g)
    _check_mode(mode)
    if g.f_star == 1:
        raise CoreNonempty("the core is nonempty (minimum cut of size 1); use core_status")
    n = g.n
    paths = _Paths(g, path_budget)
    pool = paths.all_masks() if mode == ENUMERATE else paths.flow_masks()
    while True:
        lp = LinearProgram(n + 1, {n: 1}, nonneg=[True] * n + [False])
        lp.add([1] * n + [0], EQ, 1)
        for m in pool:
            lp.add(_indicator(m, n) + [-1], GE, 1)
        out = lp_.solve(lp)
        if not out.optimal:
            raise InvariantBreach(f"least-core program is {out.status}")
        x, eps = out.solution[:n], out.value
        path, weight = shortest_path_oracle(g.arena, paths.weights(x))
        if weight >= 1 + eps:
            return LeastCoreResult(eps, dict(zip(g.players, x)), g.f_star)
        m = paths.mask(path)
        if mode == ENUMERATE or m in pool:
            raise InvariantBreach("a pooled path constraint is violated at an optimum")
        pool.append(m)


def least_core_membership(g: GameInstance, x: Mapping[str, Fraction]) -> bool:
    """Is ``x`` in the least core?  Equivalent to ``f* x`` lying in the min-cut hull."""
    _require_path_game(g)
    if g.f_star < 2:
        raise CoreNonempty("least-core membership is defined here for games with empty core")
    values = g.vector(x)
    total = sum(values, Fraction(0))
    if total != 1:
        raise PayoffTotalError(f"payoffs total {format_rational(total)}, expected 1")
    if any(v < 0 for v in values):
        return False
    return cs_core_membership(g, {p: v * g.f_star for p, v in zip(g.players, values)})


# --------------------------------------------------------------------------
# sequential programs


class _Slp:
    """Reduced sequential programs over one-player and path constraints.

    Round ``k`` maximises ``eps`` subject to ``x(N) = total``, fixed rows at
    their earlier values, ``x_i >= eps`` for free players and
    ``x(P) >= target + eps`` for free paths.  A constraint becomes fixed
    when it is tight on the whole optimal face.
    """

    def __init__(self, g: GameInstance, total: Fraction, target: Fraction, nonneg: bool,
                 mode: str, budget: int):
        self.g, self.n = g, g.n
        self.total, self.target, self.nonneg = total, target, nonneg
        self.mode = mode
        self.paths = _Paths(g, budget)
        pool = self.paths.all_masks() if mode == ENUMERATE else self.paths.flow_masks()
        self.pool: dict[int, None] = dict.fromkeys(pool)
        self.fixed_players: dict[int, Fraction] = {}
        self.fixed_paths: dict[int, Fraction] = {}
        self.state = SlpState()

    # -- programs

    def program(self, eps_fixed: Fraction | None = None) -> tuple[LinearProgram, dict]:
        n = self.n
        lp = LinearProgram(n + 1, {n: 1}, nonneg=[self.nonneg] * n + [False])
        lp.add([1] * n + [0], EQ, self.total)
        for i, v in self.fixed_players.items():
            lp.add({i: 1}, EQ, v)
        for m, v in self.fixed_paths.items():
            lp.add(_indicator(m, n) + [0], EQ, self.target + v)
        rows = {}
        for i in range(n):
            if i not in self.fixed_players:
                rows[("p", i)] = lp.add({i: 1, n: -1}, GE, 0)
        for m in self.pool:
            if m not in self.fixed_paths:
                rows[("P", m)] = lp.add(_indicator(m, n) + [-1], GE, self.target)
        if eps_fixed is not None:
            lp.add({n: 1}, EQ, eps_fixed)
        return lp, rows

    def _violated(self, x, eps) -> int | None:
        """A non-fixed path with ``x(P) < target + eps`` that is not pooled, if any."""
        bound = self.target + eps
        for p in paths_within(self.g.arena, self.paths.weights(x), bound):
            m = self.paths.mask(p)
            if m not in self.fixed_paths:
                if m in self.pool:
                    raise InvariantBreach("a pooled path constraint is violated at an optimum")
                return m
        return None

    def solve(self, objective=None, eps_fixed=None):
        """Solve a round (or a face probe when ``eps_fixed`` is given) to a certified optimum
        over all paths, pooling violated paths as needed."""
        while True:
            lp, rows = self.program(eps_fixed)
            if objective is not None:
                lp = lp.with_objective(objective(rows))
            out = lp_.solve(lp)
            if out.status == lp_.INFEASIBLE:
                raise InvariantBreach("round program is infeasible")
            if out.status == lp_.UNBOUNDED:
                raise InvariantBreach("round program is unbounded")
            if self.mode == ENUMERATE:
                return lp, rows, out
            x = out.solution[: self.n]
            eps = out.solution[self.n]
            m = self._violated(x, eps)
            if m is None:
                return lp, rows, out
            self.pool[m] = None

    def _row(self, key) -> list[Fraction]:
        kind, ref = key
        if kind == "p":
            row = [Fraction(int(k == ref)) for k in range(self.n)]
        else:
            row = _indicator(ref, self.n)
        return row + [Fraction(-1)]

    def _slack(self, key, point) -> Fraction:
        kind, ref = key
        x, eps = point[: self.n], point[self.n]
        if kind == "p":
            return x[ref] - eps
        if kind == "b":
            return x[ref]
        return sum((x[i] for i in range(self.n) if ref >> i & 1), Fraction(0)) - self.target - eps

    # -- rounds

    def run(self) -> tuple[list[Fraction], SlpState]:
        n = self.n
        tight_bounds: set[int] = set()
        last = None
        while True:
            lp, rows, out = self.solve()
            eps = out.value
            if last is not None and eps <= last:
                raise InvariantBreach(f"round value did not increase: {last} -> {eps}")
            last = eps

            span = RowSpace(n + 1)
            span.add([1] * n + [0])
            span.add([0] * n + [1])
            for i in self.fixed_players:
                span.add([Fraction(int(k == i)) for k in range(n + 1)])
            for m in self.fixed_paths:
                span.add(_indicator(m, n) + [0])
            for i in tight_bounds:
                span.add([Fraction(int(k == i)) for k in range(n + 1)])
            points = [out.solution[: n + 1]]
            duals = {key: out.duals[r] for key, r in rows.items()}

            def probe(key) -> bool:
                def objective(current_rows):
                    if key[0] == "b":
                        return {key[1]: 1}
                    return self._row(key)
                _, _, res = self.solve(objective, eps_fixed=eps)
                point = res.solution[: n + 1]
                if self._slack(key, point) > 0:
                    points.append(point)
                    return False
                return True

            def decide(key, row) -> bool:
                if any(self._slack(key, pt) > 0 for pt in points):
                    return False
                if duals.get(key) or row in span:
                    tight = True
                else:
                    tight = probe(key)
                if tight:
                    span.add(row)
                return tight

            if self.nonneg:
                for i in range(n):
                    if i not in tight_bounds:
                        if decide(("b", i), [Fraction(int(k == i)) for k in range(n + 1)]):
                            tight_bounds.add(i)

            new_players: list[int] = []
            new_paths: dict[int, None] = {}
            decided: set = set()
            while True:
                keys = [("p", i) for i in range(n) if i not in self.fixed_players]
                keys += [("P", m) for m in self.pool if m not in self.fixed_paths]
                for key in keys:
                    if key in decided:
                        continue
                    decided.add(key)
                    if decide(key, self._row(key)):
                        (new_players.append(key[1]) if key[0] == "p" else new_paths.setdefault(key[1]))
                pending = len(self.pool) + n - len(self.fixed_players) - len(self.fixed_paths) > len(decided)
                if not pending and (self.mode == ENUMERATE or not self._discover(points, eps)):
                    break

            for i in new_players:
                self.fixed_players[i] = eps
            for m in new_paths:
                self.fixed_paths[m] = eps
            self._record(eps, new_players, new_paths)
            if span.rank == n + 1:
                return list(points[0][:n]), self.state

    def _discover(self, points, eps) -> bool:
        """Pool the paths tight at the centroid of the collected optimal points.

        A path tight on the whole face is tight at any point, and the centroid
        is slack on every path some collected point is slack on.
        """
        centroid = [sum((pt[i] for pt in points), Fraction(0)) / len(points) for i in range(self.n)]
        bound = self.target + eps
        grew = False
        for p in paths_within(self.g.arena, self.paths.weights(centroid), bound, strict=False):
            m = self.paths.mask(p)
            if m not in self.fixed_paths and m not in self.pool:
                self.pool[m] = None
                grew = True
        return grew

    def _record(self, eps, new_players, new_paths) -> None:
        g, st = self.g, self.state
        players = tuple((g.players[i], eps) for i in sorted(new_players))
        labelled = sorted((self.paths.label(m), self.target + eps) for m in new_paths)
        for p, v in players:
            st.fixed_players[p] = v
        for path, v in labelled:
            st.fixed_paths[path] = v
        st.pool = [self.paths.label(m) for m in self.pool] if self.mode == GENERATE else st.pool
        st.rounds.append(SlpRound(eps, players, tuple(labelled), len(self.pool)))


def nucleolus(g: GameInstance, mode: str = GENERATE,
              path_budget: int = DEFAULT_PATH_BUDGET) -> tuple[Payoff, SlpState]:
    """Nucleolus of a path game and the trace of the programs that produced it.

    With a nonempty core the nucleolus splits the unit equally among the veto
    players and the trace is empty.
    """
    _require_path_game(g)
    _check_mode(mode)
    if g.f_star == 1:
        return core_status(g).nucleolus, SlpState()
    slp = _Slp(g, Fraction(1), Fraction(1, g.f_star), True, mode, path_budget)
    x, state = slp.run()
    return dict(zip(g.players, x)), state


def flow_nucleolus(g: GameInstance, path_budget: int = DEFAULT_PATH_BUDGET) -> Payoff:
    """Nucleolus of the flow game on ``g``'s network (every edge a player), by the
    flow-game sequential programs: ``x(E) = f*`` and path targets 1."""
    if g.kind != FLOW:
        if g.kind != EDGE or not g.network.directed:
            raise GameError("flow_nucleolus needs a flow game or a directed edge-path game")
        g = flow_game(g.network)
    if g.public_edges:
        raise GameError("flow_nucleolus requires every edge to be a player")
    if g.n == 1:
        return {g.players[0]: Fraction(g.f_star)}
    slp = _Slp(g, Fraction(g.f_star), Fraction(1), False, ENUMERATE, path_budget)
    x, _ = slp.run()
    return dict(zip(g.players, x))


__all__ = [
    "ENUMERATE",
    "GENERATE",
    "MODES",
    "CoreNonempty",
    "InvariantBreach",
    "LeastCoreResult",
    "PathBudgetExceeded",
    "SlpRound",
    "SlpState",
    "flow_nucleolus",
    "least_core",
    "least_core_membership",
    "nucleolus",
]
