"""Path cooperative games, their flow-game covers, and brute-force oracles.

A game is played on an *arena*: a directed network in which some edges are
controlled by players and the rest are public.

* edge-path games on a directed network: the arena is the network itself and
  every edge is a player;
* edge-path games on an undirected network: the arena is the gadget network
  of :func:`~pathgames.network.orient_undirected`, players are the gadget's
  central edges (named after the original edges);
* vertex-path games: the arena is the vertex-split network, players are the
  internal vertices (their split edges).

The characteristic function of a path game is always evaluated on the
original network, never on the arena, so the brute-force oracles stay
independent of the reductions the polynomial solvers rely on.

Coalitions are bitmasks over ``game.players``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import exactlp as lp_
from .exactlp import EQ, GE, LE, LinearProgram, RowSpace
from .network import (
    Network,
    NetworkError,
    bidirect,
    has_path,
    max_flow,
    min_edge_cut,
    orient_undirected,
    shortest_path_oracle,
    split_vertices,
)

EDGE = "edge-path"
VERTEX = "vertex-path"
FLOW = "flow"
KINDS = (EDGE, VERTEX, FLOW)

BRUTE_SLP_LIMIT = 12
BRUTE_EXCESS_LIMIT = 20

Payoff = dict  # player id -> Fraction


class GameError(ValueError):
    """Invalid game instance or foreign player ids."""


class PayoffTotalError(ValueError):
    """A payoff vector does not distribute the required total."""


class SizeGuardError(RuntimeError):
    """Too many players for an exhaustive computation."""


@dataclass(frozen=True)
class GameInstance:
    network: Network  # as supplied (may be undirected)
    kind: str
    players: tuple[str, ...]
    arena: Network  # directed network carrying paths and flows
    player_edges: tuple[str, ...]  # arena edge of each player
    f_star: int  # max-flow value of the arena

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def is_path_game(self) -> bool:
        return self.kind != FLOW

    @property
    def grand_value(self) -> int:
        return 1 if self.is_path_game else self.f_star

    @property
    def public_edges(self) -> tuple[str, ...]:
        owned = set(self.player_edges)
        return tuple(e for e in self.arena.edge_ids if e not in owned)

    def mask(self, coalition: Iterable[str]) -> int:
        index = {p: i for i, p in enumerate(self.players)}
        m = 0
        for p in coalition:
            if p not in index:
                raise GameError(f"{p!r} is not a player of this game")
            m |= 1 << index[p]
        return m

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.players) if mask >> i & 1)

    def arena_edges(self, mask: int) -> set[str]:
        """Arena edges usable by a coalition: its players' edges plus public edges."""
        usable = set(self.public_edges)
        usable.update(e for i, e in enumerate(self.player_edges) if mask >> i & 1)
        return usable

    def value(self, mask: int) -> int:
        """Characteristic function on a coalition bitmask."""
        if self.kind == FLOW:
            return max_flow(self.arena, self.arena_edges(mask)).value
        members = set(self.members(mask))
        net = self.network
        if self.kind == EDGE:
            return int(has_path(net, members))
        allowed = members | {net.source, net.sink}
        induced = [e.id for e in net.edges if e.tail in allowed and e.head in allowed]
        return int(has_path(net, induced))

    def vector(self, x: Mapping[str, Fraction]) -> list[Fraction]:
        """Payoff dict -> list in player order, rejecting foreign or missing ids."""
        extra = set(x) - set(self.players)
        if extra:
            raise GameError(f"{sorted(extra)[0]!r} is not a player of this game")
        missing = [p for p in self.players if p not in x]
        if missing:
            raise GameError(f"payoff for player {missing[0]!r} is missing")
        return [Fraction(x[p]) for p in self.players]


def _validate_path_game(net: Network, g: GameInstance) -> GameInstance:
    if not g.players:
        raise GameError("game has no players")
    if g.value(0) != 0:
        raise GameError("the empty coalition wins: source and sink are joined without any player")
    if g.value(g.full) != 1:
        raise GameError(f"the grand coalition loses: sink {net.sink!r} is unreachable from source {net.source!r}")
    return g


def edge_path_game(net: Network) -> GameInstance:
    """Players are edges; a coalition wins iff its edges contain a source-sink path."""
    if net.directed:
        arena, players = net, net.edge_ids
        edges = players
    else:
        arena, mapping = orient_undirected(net)
        players = net.edge_ids
        edges = tuple(mapping[e] for e in players)
    g = GameInstance(net, EDGE, tuple(players), arena, tuple(edges), max_flow(arena).value)
    return _validate_path_game(net, g)


def vertex_path_game(net: Network) -> GameInstance:
    """Players are internal vertices; a coalition wins iff it induces a source-sink path.

    Networks with an edge joining source and sink directly are rejected
    (the empty coalition would already win).
    """
    direct = [e.id for e in net.edges if {e.tail, e.head} == {net.source, net.sink}]
    if direct:
        raise GameError(f"edge {direct[0]!r} joins source and sink; the vertex game is not simple")
    directed = bidirect(net)
    arena, player_edge = split_vertices(directed)
    players = net.internal_vertices
    g = GameInstance(net, VERTEX, players, arena, tuple(player_edge[v] for v in players),
                     max_flow(arena).value)
    return _validate_path_game(net, g)


def flow_game(net: Network, players: Sequence[str] | None = None) -> GameInstance:
    """Simple flow game: a coalition earns the max flow over its edges plus the public edges."""
    if not net.directed:
        raise GameError("flow games are defined on directed networks")
    players = net.edge_ids if players is None else tuple(players)
    unknown = [p for p in players if p not in net.edge]
    if unknown:
        raise GameError(f"{unknown[0]!r} is not an edge of the network")
    if not players:
        raise GameError("game has no players")
    return GameInstance(net, FLOW, tuple(players), net, tuple(players), max_flow(net).value)


def superadditive_cover(g: GameInstance) -> GameInstance:
    """The flow game on the arena whose values are the path game's superadditive cover."""
    if g.kind == FLOW:
        return g
    return GameInstance(g.arena, FLOW, g.players, g.arena, g.player_edges, g.f_star)


def make_game(net: Network, kind: str) -> GameInstance:
    if kind in (EDGE, "edge"):
        return edge_path_game(net)
    if kind in (VERTEX, "vertex"):
        return vertex_path_game(net)
    if kind == FLOW:
        return flow_game(net)
    raise GameError(f"unknown game kind {kind!r}")


# --------------------------------------------------------------------------
# characteristic functions


def char_value(g: GameInstance, coalition: Iterable[str]) -> int:
    """0/1 value of a coalition of a path game."""
    if not g.is_path_game:
        raise GameError("char_value is for path games; use flow_value for flow games")
    return g.value(g.mask(coalition))


def flow_value(g: GameInstance, coalition: Iterable[str]) -> int:
    """Max flow using the coalition's edges and the public edges of the arena.

    For a path game this is its superadditive cover.
    """
    mask = g.mask(coalition)
    return max_flow(g.arena, g.arena_edges(mask)).value


@dataclass(frozen=True)
class TabularGame:
    """A game given by its full table of values (index = coalition bitmask)."""

    players: tuple[str, ...]
    values: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def grand_value(self) -> int:
        return self.values[self.full]

    def value(self, mask: int) -> int:
        return self.values[mask]

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.players) if mask >> i & 1)

    def vector(self, x: Mapping[str, Fraction]) -> list[Fraction]:
        return [Fraction(x[p]) for p in self.players]


def tabulate(g, limit: int = BRUTE_EXCESS_LIMIT) -> TabularGame:
    """Evaluate every coalition once."""
    if isinstance(g, TabularGame):
        return g
    if g.n > limit:
        raise SizeGuardError(f"{g.n} players exceed the exhaustive limit of {limit}")
    return TabularGame(tuple(g.players), tuple(g.value(m) for m in range(1 << g.n)))


# --------------------------------------------------------------------------
# veto players, core, CS-core


def veto_players(g: GameInstance) -> tuple[str, ...]:
    """Players whose departure makes the grand coalition lose."""
    if not g.is_path_game:
        raise GameError("veto players are defined for simple (path) games")
    return tuple(p for i, p in enumerate(g.players) if g.value(g.full & ~(1 << i)) == 0)


@dataclass(frozen=True)
class CoreStatus:
    nonempty: bool
    min_cut_size: int
    veto: tuple[str, ...]
    nucleolus: Payoff | None  # 1/k on the k veto players when the core is nonempty

    def contains(self, x: Mapping[str, Fraction]) -> bool:
        """Core membership: nonnegative, total 1, supported on veto players."""
        if not self.nonempty:
            return False
        values = {p: Fraction(v) for p, v in x.items()}
        return (all(v >= 0 for v in values.values()) and sum(values.values()) == 1
                and all(v == 0 for p, v in values.items() if p not in self.veto))


def core_status(g: GameInstance) -> CoreStatus:
    """The core is nonempty iff the minimum cut has size 1; then its nucleolus
    splits the unit equally among the veto players."""
    if not g.is_path_game:
        raise GameError("core_status is for path games")
    veto = veto_players(g)
    if (g.f_star == 1) != bool(veto):
        raise AssertionError(f"min cut size {g.f_star} disagrees with veto set {veto}")
    if g.f_star != 1:
        return CoreStatus(False, g.f_star, (), None)
    share = Fraction(1, len(veto))
    return CoreStatus(True, 1, veto, {p: (share if p in veto else Fraction(0)) for p in g.players})


def _path_players(g: GameInstance, path) -> int:
    owner = {e: i for i, e in enumerate(g.player_edges)}
    m = 0
    for eid in path:
        if eid in owner:
            m |= 1 << owner[eid]
    return m


def cs_core_membership(g: GameInstance, x: Mapping[str, Fraction]) -> bool:
    """Is ``x`` in the convex hull of minimum-cut indicators?

    Decided without listing cuts: ``x >= 0``, ``x(N) = f*`` and every
    source-sink path of the arena carries weight at least 1.  Raises
    :class:`PayoffTotalError` when ``x(N) != f*``.
    """
    if not g.is_path_game:
        raise GameError("cs_core_membership is for path games")
    values = g.vector(x)
    total = sum(values, Fraction(0))
    if total != g.f_star:
        raise PayoffTotalError(f"payoffs total {lp_.format_rational(total)}, expected f* = {g.f_star}")
    if any(v < 0 for v in values):
        return False
    weights = dict(zip(g.player_edges, values))
    _, weight = shortest_path_oracle(g.arena, weights)
    return weight >= 1


def cs_core_witness(g: GameInstance, x: Mapping[str, Fraction]) -> tuple[tuple[str, ...], ...]:
    """Coalition structure supporting ``x`` in the CS-core.

    Winning parts are the player sets of a maximum-flow decomposition; the
    remaining players (if any) form one losing part.
    """
    if not cs_core_membership(g, x):
        raise GameError("payoff vector is not in the CS-core")
    values = dict(zip(g.players, g.vector(x)))
    parts = [_path_players(g, p) for p in max_flow(g.arena).paths]
    rest = g.full
    for m in parts:
        rest &= ~m
    if rest:
        parts.append(rest)
    structure = tuple(g.members(m) for m in parts)
    # validate before handing out
    seen = [p for part in structure for p in part]
    if sorted(seen) != sorted(g.players) or len(set(seen)) != len(seen):
        raise AssertionError("witness is not a partition of the players")
    for m, part in zip(parts, structure):
        if sum((values[p] for p in part), Fraction(0)) != g.value(m):
            raise AssertionError(f"part {part} is not paid its worth")
    return structure


def player_min_cut(g: GameInstance) -> tuple[str, ...]:
    """One minimum cut made of players, in player order.

    Read off the arena's residual graph; a public cut edge is swapped for
    the player edge every path through it must also use (the unique edge
    leaving its head, or entering its tail).
    """
    if not g.is_path_game:
        raise GameError("player_min_cut is for path games")
    arena = g.arena
    owner = {e: i for i, e in enumerate(g.player_edges)}
    out_edges: dict[str, list[str]] = {v: [] for v in arena.vertices}
    in_edges: dict[str, list[str]] = {v: [] for v in arena.vertices}
    for e in arena.edges:
        out_edges[e.tail].append(e.id)
        in_edges[e.head].append(e.id)
    mask = 0
    for eid in min_edge_cut(arena).members:
        if eid not in owner:
            e = arena.edge[eid]
            after, before = out_edges[e.head], in_edges[e.tail]
            if len(after) == 1 and after[0] in owner:
                eid = after[0]
            elif len(before) == 1 and before[0] in owner:
                eid = before[0]
            else:
                raise AssertionError(f"public edge {eid!r} in a minimum cut has no player neighbour")
        mask |= 1 << owner[eid]
    if bin(mask).count("1") != g.f_star or g.value(g.full & ~mask) != 0:
        raise AssertionError("player cut is not a minimum cut")
    return g.members(mask)


def minimum_cuts(g) -> list[int]:
    """Every minimum winning-blocking player set (as bitmasks), by exhaustion."""
    t = tabulate(g)
    for size in range(1, t.n + 1):
        cuts = []
        for combo in combinations(range(t.n), size):
            m = sum(1 << i for i in combo)
            if t.value(t.full & ~m) == 0:
                cuts.append(m)
        if cuts:
            return cuts
    return []


def hull_membership(g, x: Mapping[str, Fraction]) -> bool:
    """Explicit test: is ``x`` a convex combination of enumerated minimum-cut indicators?"""
    t = tabulate(g)
    cuts = minimum_cuts(t)
    values = t.vector(x)
    lp = LinearProgram(len(cuts), nonneg=True)
    lp.add([1] * len(cuts), EQ, 1)
    for i in range(t.n):
        lp.add([1 if m >> i & 1 else 0 for m in cuts], EQ, values[i])
    return lp_.feasible(lp).optimal


# --------------------------------------------------------------------------
# brute-force oracles


def _canonical(mask: int) -> tuple[int, int]:
    return (bin(mask).count("1"), mask)


def excess(g, x: Sequence[Fraction], mask: int) -> Fraction:
    return sum((v for i, v in enumerate(x) if mask >> i & 1), Fraction(0)) - g.value(mask)


def brute_excess_vector(g, x: Mapping[str, Fraction]) -> list[tuple[tuple[str, ...], Fraction]]:
    """All ``2^n`` coalition excesses in non-decreasing order (ties in canonical coalition order)."""
    t = tabulate(g, BRUTE_EXCESS_LIMIT)
    values = t.vector(x) if isinstance(g, TabularGame) else g.vector(x)
    rows = [(excess(t, values, m), _canonical(m), m) for m in range(1 << t.n)]
    rows.sort()
    return [(t.members(m), e) for e, _, m in rows]


def sorted_excesses(g, x: Sequence[Fraction]) -> list[Fraction]:
    """Non-decreasing excess values of every coalition (for lexicographic comparison)."""
    return sorted(excess(g, x, m) for m in range(1 << g.n))


def _lower_bounds(t: TabularGame, individually_rational: bool) -> list[Fraction]:
    return [Fraction(t.value(1 << i)) if individually_rational else Fraction(0) for i in range(t.n)]


def brute_least_core(g, individually_rational: bool = False) -> tuple[Fraction, Payoff]:
    """Least-core value over all coalitions (empty and grand coalition included) and a witness.

    Payoffs are bounded below by 0, or by singleton values when
    ``individually_rational`` is set.
    """
    t = tabulate(g, BRUTE_SLP_LIMIT)
    n = t.n
    lp = LinearProgram(n + 1, {n: 1}, nonneg=[True] * n + [False])
    lp.add([1] * n + [0], EQ, t.grand_value)
    for i, lb in enumerate(_lower_bounds(t, individually_rational)):
        if lb:
            lp.add({i: 1}, GE, lb)
    lp.add({n: 1}, LE, 0)  # e(x, {}) = e(x, N) = 0
    for m in range(1, t.full):
        lp.add([1 if m >> i & 1 else 0 for i in range(n)] + [-1], GE, t.value(m))
    out = lp_.solve(lp)
    if not out.optimal:
        raise GameError(f"least-core program is {out.status} (empty imputation set?)")
    return out.value, dict(zip(t.players, out.solution[:n]))


@dataclass(frozen=True)
class BruteRound:
    epsilon: Fraction
    fixed: tuple[tuple[str, ...], ...]


def brute_nucleolus(g, individually_rational: bool = False, *, rounds: list | None = None) -> Payoff:
    """Nucleolus by the full sequence of programs over every proper coalition.

    Each round maximises the smallest free excess, then fixes every
    coalition whose constraint is tight at all optimal solutions; stops when
    the optimal face is a single point.  ``rounds``, if given, receives a
    :class:`BruteRound` per program.
    """
    t = tabulate(g, BRUTE_SLP_LIMIT)
    n = t.n
    total = Fraction(t.grand_value)
    lower = _lower_bounds(t, individually_rational)
    if sum(lower) > total:
        raise GameError("the imputation set is empty")
    if n == 1:
        return {t.players[0]: total}

    def indicator(m):
        return [Fraction(m >> i & 1) for i in range(n)]

    fixed: dict[int, Fraction] = {}
    tight_bounds: set[int] = set()
    last = None
    while True:
        lp = LinearProgram(n + 1, {n: 1}, nonneg=[lb == 0 for lb in lower] + [False])
        lp.add([1] * n + [0], EQ, total)
        bound_row = {}
        for i, lb in enumerate(lower):
            if lb:
                bound_row[i] = lp.add({i: 1}, GE, lb)
        for m, eps in fixed.items():
            lp.add(indicator(m) + [0], EQ, t.value(m) + eps)
        free_row = {}
        for m in sorted(set(range(1, t.full)) - set(fixed), key=_canonical):
            free_row[m] = lp.add(indicator(m) + [-1], GE, t.value(m))
        out = lp_.solve(lp)
        if not out.optimal:
            raise AssertionError(f"round program is {out.status}")
        eps = out.value
        if last is not None and eps <= last:
            raise AssertionError(f"round value did not increase: {last} -> {eps}")
        last = eps

        span = RowSpace(n + 1)
        span.add([1] * n + [0])
        span.add([0] * n + [1])
        for m in fixed:
            span.add(indicator(m) + [0])
        for i in tight_bounds:
            span.add([Fraction(int(k == i)) for k in range(n + 1)])
        points = [out.solution]

        def slack_somewhere(row_index=None, var=None):
            for x in points:
                if var is not None:
                    if x[var] > lower[var]:
                        return True
                elif lp.constraints[row_index].slack(x) > 0:
                    return True
            return False

        # bounds first so that coalitions padded with zero-paid players fall into the span
        for i in range(n):
            if i in tight_bounds:
                continue
            if slack_somewhere(row_index=bound_row.get(i), var=None if i in bound_row else i):
                continue
            row = [Fraction(int(k == i)) for k in range(n + 1)]
            if row in span:
                tight = True
            elif i in bound_row:
                tight = lp_.probe_tight(lp, eps, bound_row[i])
            else:
                slack, probe = lp_.max_slack_on_face(lp, eps, variable=i)
                tight = slack == 0
                if not tight:
                    points.append(probe.solution[: n + 1])
            if tight:
                tight_bounds.add(i)
                span.add(row)

        newly = []
        for m, r in free_row.items():
            if slack_somewhere(row_index=r):
                continue
            row = indicator(m) + [Fraction(-1)]
            if out.duals[r] or row in span:
                # a positive multiplier, or a row whose value is constant on the face
                tight = True
            else:
                slack, probe = lp_.max_slack_on_face(lp, eps, r)
                tight = slack == 0
                if not tight:
                    points.append(probe.solution[: n + 1])
            if tight:
                newly.append(m)
                span.add(row)
        for m in newly:
            fixed[m] = eps
        if rounds is not None:
            rounds.append(BruteRound(eps, tuple(t.members(m) for m in sorted(newly, key=_canonical))))
        if span.rank == n + 1:
            return dict(zip(t.players, points[0][:n]))
