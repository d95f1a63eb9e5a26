"""Vertex players and undirected edges are handled by reductions to directed edge games.

    python demos/vertices_and_undirected.py
"""

from pathlib import Path

from pathgames import brute_nucleolus, least_core, load_network, nucleolus, vertex_path_game, edge_path_game
from pathgames.exactlp import format_rational as fmt

fixtures = Path(__file__).resolve().parent.parent / "fixtures"

diamond = vertex_path_game(load_network(fixtures / "vertex_diamond.json"))
print("Vertex game on s->a->t, s->b->t: players are the relay vertices a and b.")
print("  internally each vertex v becomes an edge v' -> v''; the split network has",
      len(diamond.arena.edges), "edges")
print("  least-core value", fmt(least_core(diamond).epsilon))
print("  nucleolus", {p: fmt(v) for p, v in nucleolus(diamond)[0].items()})

triangle = edge_path_game(load_network(fixtures / "undirected_triangle.json"))
print("\nUndirected triangle s-a, a-t, s-t: each edge is replaced by a small one-way gadget.")
x, _ = nucleolus(triangle)
print("  nucleolus", {p: fmt(v) for p, v in x.items()}, "(keyed by the original edges)")
print("  the direct edge s-t is worth as much as the two-edge route together")
print("  matches the oracle on undirected path existence:", x == brute_nucleolus(triangle))
