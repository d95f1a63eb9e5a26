"""Seeded random networks shared by the property and acceptance tests."""

from __future__ import annotations

import random

from pathgames.network import Network, max_flow, orient_undirected, reachable


def random_dag(rng: random.Random, min_edges: int = 4, max_edges: int = 10, inner: int | None = None,
               min_flow: int = 2, direct: bool = True) -> Network:
    """A DAG on s, v0.., t with a random number of edges and max flow at least ``min_flow``.

    Parallel edges are allowed; ``direct=False`` forbids s->t edges.
    """
    while True:
        k = inner if inner is not None else rng.randint(1, 5)
        order = ["s"] + [f"v{i}" for i in range(k)] + ["t"]
        pairs = [(i, j) for i in range(len(order)) for j in range(i + 1, len(order))
                 if direct or (i, j) != (0, len(order) - 1)]
        m = rng.randint(min_edges, max_edges)
        edges = []
        for idx in range(m):
            i, j = rng.choice(pairs)
            edges.append((f"e{idx}", order[i], order[j]))
        net = Network.build(edges, vertices=order)
        if max_flow(net).value >= min_flow:
            return net


def random_undirected(rng: random.Random, max_edges: int = 6) -> Network:
    """Connected-enough undirected multigraph (no loops) whose gadget flow is at least 2."""
    while True:
        k = rng.randint(1, 3)
        order = ["s"] + [f"v{i}" for i in range(k)] + ["t"]
        m = rng.randint(3, max_edges)
        edges = []
        for idx in range(m):
            a, b = rng.sample(order, 2)
            edges.append((f"e{idx}", a, b))
        net = Network.build(edges, vertices=order, directed=False)
        if "t" in reachable(net) and max_flow(orient_undirected(net)[0]).value >= 2:
            return net
