"""Unit-capacity source/sink networks and the graph algorithms the games need.

Every traversal visits edges in edge-id order (plain string order), so all
results are deterministic and paths come out in lexicographic order of their
edge-id sequences.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path as FsPath
from typing import Iterable, Iterator, Mapping

Path = tuple  # ordered edge ids from source to sink

DEFAULT_PATH_BUDGET = 100_000


class NetworkError(ValueError):
    """Malformed or invalid network description."""


class PathBudgetExceeded(RuntimeError):
    pass


class Unreachable(ValueError):
    """The sink cannot be reached from the source."""


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    source: str
    sink: str
    directed: bool = True

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            dup = next(v for v in self.vertices if self.vertices.count(v) > 1)
            raise NetworkError(f"duplicate vertex {dup!r}")
        for role, v in (("source", self.source), ("sink", self.sink)):
            if v not in vset:
                raise NetworkError(f"{role} {v!r} is not a declared vertex")
        if self.source == self.sink:
            raise NetworkError(f"source and sink coincide ({self.source!r})")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise NetworkError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.tail == e.head:
                raise NetworkError(f"self-loop: edge {e.id!r} at vertex {e.tail!r}")
            for end in (e.tail, e.head):
                if end not in vset:
                    raise NetworkError(f"edge {e.id!r} uses undeclared vertex {end!r}")

    @classmethod
    def build(cls, edges: Iterable[tuple[str, str, str]], source: str = "s", sink: str = "t",
              directed: bool = True, vertices: Iterable[str] | None = None) -> "Network":
        """Convenience constructor from ``(id, tail, head)`` triples."""
        edges = tuple(Edge(*e) for e in edges)
        if vertices is None:
            order = [source]
            for e in edges:
                order += [e.tail, e.head]
            order.append(sink)
            vertices = dict.fromkeys(order)
        return cls(tuple(vertices), edges, source, sink, directed)

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def internal_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if v not in (self.source, self.sink))

    @cached_property
    def _out(self) -> dict[str, list[tuple[str, str]]]:
        """vertex -> [(edge id, neighbour)] in edge-id order; both ways if undirected."""
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.tail].append((e.id, e.head))
            if not self.directed:
                out[e.head].append((e.id, e.tail))
        for arcs in out.values():
            arcs.sort()
        return out

    def arcs_from(self, v: str, usable=None) -> Iterator[tuple[str, str]]:
        for eid, w in self._out[v]:
            if usable is None or eid in usable:
                yield eid, w

    def to_dict(self) -> dict:
        return {
            "directed": self.directed,
            "source": self.source,
            "sink": self.sink,
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def parse_network(text: str) -> Network:
    """Parse the JSON network document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise NetworkError("malformed document: top level must be an object")
    for key in ("source", "sink"):
        if key not in doc:
            raise NetworkError(f"missing {key}")
        if not isinstance(doc[key], str):
            raise NetworkError(f"{key} must be a string id")
    directed = doc.get("directed", True)
    if not isinstance(directed, bool):
        raise NetworkError("'directed' must be true or false")
    raw_edges = doc.get("edges")
    if not isinstance(raw_edges, list):
        raise NetworkError("missing edges list")
    edges = []
    for k, item in enumerate(raw_edges):
        if not isinstance(item, dict) or not all(isinstance(item.get(f), str) for f in ("id", "tail", "head")):
            raise NetworkError(f"malformed edge #{k}: need string fields id, tail, head")
        edges.append(Edge(item["id"], item["tail"], item["head"]))
    vertices = doc.get("vertices")
    if vertices is None:
        vertices = list(dict.fromkeys([doc["source"], *(v for e in edges for v in (e.tail, e.head)), doc["sink"]]))
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise NetworkError("vertices must be a list of string ids")
    return Network(tuple(vertices), tuple(edges), doc["source"], doc["sink"], directed)


def load_network(path: str | FsPath) -> Network:
    return parse_network(FsPath(path).read_text())


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    k = 1
    while name in taken:
        name = f"{base}#{k}"
        k += 1
    taken.add(name)
    return name


# --------------------------------------------------------------------------
# reachability and paths


def reachable(net: Network, usable: Iterable[str] | None = None, start: str | None = None) -> set[str]:
    usable = None if usable is None else set(usable)
    start = net.source if start is None else start
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for _, w in net.arcs_from(v, usable):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def has_path(net: Network, usable: Iterable[str] | None = None) -> bool:
    """Does the subnetwork on ``usable`` edges (all edges if None) join source to sink?"""
    return net.sink in reachable(net, usable)


def is_path(net: Network, path: Iterable[str]) -> bool:
    """Is ``path`` a simple source-sink path of ``net``?"""
    v = net.source
    visited = {v}
    path = list(path)
    if not path:
        return False
    for eid in path:
        e = net.edge.get(eid)
        if e is None:
            return False
        if e.tail == v:
            w = e.head
        elif not net.directed and e.head == v:
            w = e.tail
        else:
            return False
        if w in visited:
            return False
        visited.add(w)
        v = w
    return v == net.sink


def enumerate_paths(net: Network, limit: int = DEFAULT_PATH_BUDGET,
                    usable: Iterable[str] | None = None) -> list[Path]:
    """All simple source-sink paths, lexicographic by edge-id sequence.

    Raises :class:`PathBudgetExceeded` once more than ``limit`` paths exist.
    """
    usable = None if usable is None else set(usable)
    paths = []
    for p in _simple_paths(net, lambda v: list(net.arcs_from(v, usable))):
        if len(paths) == limit:
            raise PathBudgetExceeded(f"more than {limit} source-sink paths")
        paths.append(p)
    return paths


def _simple_paths(net: Network, arcs) -> Iterator[Path]:
    """Depth-first enumeration; visiting arcs in the given order yields
    paths in lexicographic order."""
    on_path = {net.source}
    current = [net.source]
    trail: list[str] = []
    stack = [iter(arcs(net.source))]
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            if trail:
                on_path.discard(current.pop())
                trail.pop()
            continue
        eid, w = step
        if w in on_path:
            continue
        if w == net.sink:
            yield tuple(trail) + (eid,)
            continue
        trail.append(eid)
        on_path.add(w)
        current.append(w)
        stack.append(iter(arcs(w)))


def path_vertices(net: Network, path: Iterable[str]) -> list[str]:
    vs = [net.source]
    for eid in path:
        e = net.edge[eid]
        vs.append(e.head if e.tail == vs[-1] else e.tail)
    return vs


def _distances_to_sink(net: Network, weights: Mapping[str, Fraction], usable) -> dict[str, Fraction]:
    incoming: dict[str, list[tuple[str, str]]] = {v: [] for v in net.vertices}
    for e in net.edges:
        if usable is not None and e.id not in usable:
            continue
        incoming[e.head].append((e.id, e.tail))
        if not net.directed:
            incoming[e.tail].append((e.id, e.head))
    dist = {net.sink: Fraction(0)}
    heap = [(Fraction(0), net.sink)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for eid, u in incoming[v]:
            nd = d + weights.get(eid, 0)
            if u not in dist or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def _check_weights(weights: Mapping[str, Fraction]) -> dict[str, Fraction]:
    clean = {}
    for eid, w in weights.items():
        w = Fraction(w)
        if w < 0:
            raise ValueError(f"negative weight {w} on edge {eid!r}")
        clean[eid] = w
    return clean


def minimum_weight_paths(net: Network, weights: Mapping[str, Fraction], limit: int = DEFAULT_PATH_BUDGET,
                         usable: Iterable[str] | None = None, first_only: bool = False) -> tuple[Fraction, list[Path]]:
    """Minimum path weight and every simple path attaining it (edges absent from
    ``weights`` weigh 0)."""
    weights = _check_weights(weights)
    usable = None if usable is None else set(usable)
    dist = _distances_to_sink(net, weights, usable)
    if net.source not in dist:
        raise Unreachable(f"sink {net.sink!r} is unreachable from source {net.source!r}")

    # restrict arcs to those on some minimum-weight walk
    def arcs(v):
        return [(eid, w) for eid, w in net.arcs_from(v, usable)
                if w in dist and dist[v] == weights.get(eid, 0) + dist[w]]

    paths = []
    for p in _simple_paths(net, arcs):
        if len(paths) == limit:
            raise PathBudgetExceeded(f"more than {limit} minimum-weight paths")
        paths.append(p)
        if first_only:
            break
    return dist[net.source], paths


def shortest_path_oracle(net: Network, weights: Mapping[str, Fraction],
                         usable: Iterable[str] | None = None) -> tuple[Path, Fraction]:
    """Lexicographically least minimum-weight source-sink path and its exact weight."""
    total, paths = minimum_weight_paths(net, weights, usable=usable, first_only=True)
    return paths[0], total


# --------------------------------------------------------------------------
# flows and cuts


@dataclass(frozen=True)
class MaxFlowResult:
    value: int
    paths: tuple[Path, ...]
    flow_edges: frozenset = field(default_factory=frozenset, repr=False)


@dataclass(frozen=True)
class CutIndicator:
    players: tuple[str, ...]
    members: frozenset

    @property
    def indicator(self) -> dict[str, int]:
        return {p: int(p in self.members) for p in self.players}

    def __len__(self) -> int:
        return len(self.members)


def _require_directed(net: Network) -> None:
    if not net.directed:
        raise NetworkError("operation needs a directed network; orient undirected inputs first")


def _augment(net: Network, usable, used: set[str]) -> tuple[bool, set[str]]:
    """One BFS augmentation in the residual graph; returns (augmented, reached)."""
    back: dict[str, list[tuple[str, str]]] = {v: [] for v in net.vertices}
    for eid in used:
        e = net.edge[eid]
        back[e.head].append((eid, e.tail))
    for arcs in back.values():
        arcs.sort()
    parent: dict[str, tuple[str, str, bool]] = {}
    seen = {net.source}
    queue = deque([net.source])
    while queue and net.sink not in seen:
        v = queue.popleft()
        moves = [(eid, w, True) for eid, w in net.arcs_from(v, usable) if eid not in used]
        moves += [(eid, w, False) for eid, w in back[v]]
        for eid, w, forward in moves:
            if w not in seen:
                seen.add(w)
                parent[w] = (v, eid, forward)
                queue.append(w)
    if net.sink not in seen:
        return False, seen
    v = net.sink
    while v != net.source:
        u, eid, forward = parent[v]
        if forward:
            used.add(eid)
        else:
            used.discard(eid)
        v = u
    return True, seen


def _decompose(net: Network, used: set[str]) -> list[Path]:
    remaining = set(used)
    paths = []
    while True:
        out = sorted(eid for eid in remaining if net.edge[eid].tail == net.source)
        if not out:
            break
        walk: list[str] = []
        position = {net.source: 0}
        v = net.source
        while v != net.sink:
            eid = min(e for e in remaining if net.edge[e].tail == v and e not in walk)
            walk.append(eid)
            v = net.edge[eid].head
            if v in position:
                # drop the cycle; the remaining flow is still a maximum flow
                cut = position[v]
                for dropped in walk[cut:]:
                    remaining.discard(dropped)
                    position.pop(net.edge[dropped].head, None)
                walk = walk[:cut]
                position[v] = cut
            else:
                position[v] = len(walk)
        remaining.difference_update(walk)
        paths.append(tuple(walk))
    return paths


def _max_flow_state(net: Network, usable) -> tuple[set[str], set[str]]:
    usable = None if usable is None else set(usable)
    used: set[str] = set()
    while True:
        grew, reached = _augment(net, usable, used)
        if not grew:
            return used, reached


def max_flow(net: Network, usable: Iterable[str] | None = None) -> MaxFlowResult:
    """Maximum number of edge-disjoint source-sink paths, with a decomposition.

    ``usable`` restricts the network to a subset of its edges.
    """
    _require_directed(net)
    used, _ = _max_flow_state(net, usable)
    paths = _decompose(net, used)
    return MaxFlowResult(len(paths), tuple(paths), frozenset(e for p in paths for e in p))


def min_edge_cut(net: Network) -> CutIndicator:
    """A minimum source-sink edge cut read off the final residual graph."""
    _require_directed(net)
    used, reached = _max_flow_state(net, None)
    if not used:
        raise Unreachable("sink unreachable from source: no cut needed")
    members = frozenset(e.id for e in net.edges if e.tail in reached and e.head not in reached)
    return CutIndicator(net.edge_ids, members)


def split_vertices(net: Network) -> tuple[Network, dict[str, str]]:
    """Split each internal vertex v into v' -> v''.

    Returns the split network and the map ``vertex -> player edge id`` (the
    set E_V), in vertex declaration order.  Original edges keep their ids and
    become public edges ``(u'', v')``.
    """
    _require_directed(net)
    taken_v = set(net.vertices)
    taken_e = set(net.edge_ids)
    s, t = net.source, net.sink
    inner, outer, player = {}, {}, {}
    vertices = [s]
    edges = []
    for v in net.internal_vertices:
        taken_v.discard(v)
    for v in net.internal_vertices:
        inner[v] = _fresh(f"{v}'", taken_v)
        outer[v] = _fresh(f"{v}''", taken_v)
        vertices += [inner[v], outer[v]]
        player[v] = _fresh(v, taken_e)
        edges.append(Edge(player[v], inner[v], outer[v]))
    vertices.append(t)
    for e in net.edges:
        tail = outer.get(e.tail, e.tail)
        head = inner.get(e.head, e.head)
        edges.append(Edge(e.id, tail, head))
    return Network(tuple(vertices), tuple(edges), s, t, True), player


def min_vertex_cut(net: Network) -> CutIndicator:
    """A minimum set of internal vertices separating source from sink."""
    _require_directed(net)
    direct = [e.id for e in net.edges if e.tail == net.source and e.head == net.sink]
    if direct:
        raise NetworkError(f"uncuttable: edge {direct[0]!r} joins source to sink directly")
    split, player = split_vertices(net)
    cut = min_edge_cut(split)
    owner = {eid: v for v, eid in player.items()}
    # vertex of each split network node
    node_owner = {}
    for v, eid in player.items():
        e = split.edge[eid]
        node_owner[e.tail] = v
        node_owner[e.head] = v
    members = set()
    for eid in cut.members:
        if eid in owner:
            members.add(owner[eid])
            continue
        # public edge (u'', v'): every path through it also uses an adjacent player edge
        e = split.edge[eid]
        members.add(node_owner[e.head] if e.head in node_owner else node_owner[e.tail])
    return CutIndicator(net.internal_vertices, frozenset(members))


def bidirect(net: Network) -> Network:
    """Directed copy of an undirected network with two opposite arcs per edge."""
    if net.directed:
        return net
    taken = set(net.edge_ids)
    edges = []
    for e in net.edges:
        edges.append(Edge(_fresh(f"{e.id}>", taken), e.tail, e.head))
        edges.append(Edge(_fresh(f"{e.id}<", taken), e.head, e.tail))
    return Network(net.vertices, tuple(edges), net.source, net.sink, True)


def orient_undirected(net: Network) -> tuple[Network, dict[str, str]]:
    """Replace each undirected edge {u, v} by a one-player-edge gadget.

    Gadget: ``u -> a, v -> a, a -> b (player), b -> u, b -> v``.  Any
    traversal of the gadget crosses its player edge exactly once.  The player
    edge keeps the original edge id; auxiliary vertices and edges get fresh
    ids.  Returns the directed network and ``original id -> player edge id``.
    """
    if net.directed:
        raise NetworkError("orient_undirected expects an undirected network")
    taken_v = set(net.vertices)
    taken_e = set(net.edge_ids)
    vertices = list(net.vertices)
    edges = []
    mapping = {}
    for e in net.edges:
        a = _fresh(f"{e.id}:in", taken_v)
        b = _fresh(f"{e.id}:out", taken_v)
        vertices += [a, b]
        u, v = e.tail, e.head
        edges += [
            Edge(_fresh(f"{e.id}:{u}>", taken_e), u, a),
            Edge(_fresh(f"{e.id}:{v}>", taken_e), v, a),
            Edge(e.id, a, b),
            Edge(_fresh(f"{e.id}:>{u}", taken_e), b, u),
            Edge(_fresh(f"{e.id}:>{v}", taken_e), b, v),
        ]
        mapping[e.id] = e.id
    return Network(tuple(vertices), tuple(edges), net.source, net.sink, True), mapping


def paths_within(net: Network, weights: Mapping[str, Fraction], bound: Fraction, strict: bool = True,
                 usable: Iterable[str] | None = None) -> Iterator[Path]:
    """Lazily yield, in lexicographic order, every simple source-sink path whose
    weight is below ``bound`` (at most ``bound`` when ``strict`` is false).

    Partial paths are pruned with exact distance-to-sink lower bounds, so only
    prefixes of qualifying walks are explored.
    """
    weights = _check_weights(weights)
    usable = None if usable is None else set(usable)
    dist = _distances_to_sink(net, weights, usable)
    bound = Fraction(bound)

    def ok(total):
        return total < bound if strict else total <= bound

    if net.source not in dist or not ok(dist[net.source]):
        return
    on_path = {net.source}
    trail: list[str] = []
    spent = [Fraction(0)]
    current = [net.source]

    def arcs(v):
        return [(eid, w) for eid, w in net.arcs_from(v, usable)
                if w in dist and ok(spent[-1] + weights.get(eid, 0) + dist[w])]

    stack = [iter(arcs(net.source))]
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            if trail:
                on_path.discard(current.pop())
                trail.pop()
                spent.pop()
            continue
        eid, w = step
        if w in on_path:
            continue
        if w == net.sink:
            yield tuple(trail) + (eid,)
            continue
        trail.append(eid)
        on_path.add(w)
        current.append(w)
        spent.append(spent[-1] + weights.get(eid, 0))
        stack.append(iter(arcs(w)))
