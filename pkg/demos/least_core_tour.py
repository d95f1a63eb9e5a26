"""A walk through the core, CS-core and least core of the Wheatstone network.

    python demos/least_core_tour.py
"""

from fractions import Fraction
from pathlib import Path

from pathgames import (
    core_status,
    cs_core_membership,
    cs_core_witness,
    edge_path_game,
    least_core,
    least_core_membership,
    load_network,
    minimum_cuts,
)
from pathgames.exactlp import format_rational as fmt

net = load_network(Path(__file__).resolve().parent.parent / "fixtures" / "G5.json")
g = edge_path_game(net)
print("Wheatstone network: s->a, s->b, a->b, a->t, b->t; every edge is a player.")

status = core_status(g)
print(f"\nNo single edge is a veto player, so the core is {'nonempty' if status.nonempty else 'empty'}:"
      f" the smallest cut has {status.min_cut_size} edges.")

print("\nThe CS-core is the hull of the minimum-cut indicators. They are:")
for m in minimum_cuts(g):
    print("   ", g.members(m))

x = {"sa": Fraction(1, 2), "sb": Fraction(1, 2), "ab": 0, "at": Fraction(1, 2), "bt": Fraction(1, 2)}
print("\nHalf of each outer edge is an average of two cuts, hence in the CS-core:", cs_core_membership(g, x))
print("Supporting coalition structure:", cs_core_witness(g, x))

lc = least_core(g)
print(f"\nLeast-core value: {fmt(lc.epsilon)} (= 1/f* - 1 with f* = {lc.f_star}).")
print("A least-core payoff:", {p: fmt(v) for p, v in lc.witness.items()})
y = {p: v / g.f_star for p, v in x.items()}
print("The CS-core point above divided by f* is in the least core:", least_core_membership(g, y))
bad = {"sa": 1, "sb": 0, "ab": 0, "at": 0, "bt": 0}
print("Paying everything to sa is not (path sb->bt gets nothing):", least_core_membership(g, bad))
