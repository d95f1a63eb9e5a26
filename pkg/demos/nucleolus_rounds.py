"""Follow the sequential programs that pin down the nucleolus of the Wheatstone network,
then confirm the answer against the exhaustive oracle.

    python demos/nucleolus_rounds.py
"""

from pathlib import Path

from pathgames import brute_nucleolus, edge_path_game, load_network, nucleolus
from pathgames.exactlp import format_rational as fmt

g = edge_path_game(load_network(Path(__file__).resolve().parent.parent / "fixtures" / "G5.json"))
x, trace = nucleolus(g, "generate")

print(f"max flow f* = {g.f_star}, so every path must carry at least 1/{g.f_star} + eps.\n")
for k, r in enumerate(trace.rounds, 1):
    print(f"round {k}: eps = {fmt(r.epsilon)}  (paths generated so far: {r.pool_size})")
    for p, v in r.fixed_players:
        print(f"    edge {p} fixed at {fmt(v)}")
    for path, v in r.fixed_paths:
        print(f"    path {'-'.join(path)} fixed at {fmt(v)}")

print("\nnucleolus:", {p: fmt(v) for p, v in x.items()})
print("the bridge a->b lies on no minimum cut and gets", fmt(x["ab"]))
print("agrees with the 2^5-coalition oracle:", x == brute_nucleolus(g))
