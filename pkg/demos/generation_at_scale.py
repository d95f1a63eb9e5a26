"""Both solver modes on a layered network.

Generate mode starts from the three paths of a maximum flow and adds paths
only when the separation oracle finds one violated (or one tight on the
optimal face).  Here the nucleolus pays only the edges at both ends, so
every one of the 27 paths ends up tight and both modes finish with the
full set; they also agree on every round value.

    python demos/generation_at_scale.py
"""

import time

from pathgames import Network, edge_path_game, enumerate_paths, least_core, nucleolus
from pathgames.exactlp import format_rational as fmt

# three layers of three vertices, complete bipartite between consecutive layers
layers = [["s"], ["a1", "a2", "a3"], ["b1", "b2", "b3"], ["c1", "c2", "c3"], ["t"]]
edges = []
for left, right in zip(layers, layers[1:]):
    for u in left:
        for v in right:
            edges.append((f"{u}{v}", u, v))
net = Network.build(edges)
g = edge_path_game(net)
print(f"{len(edges)} edges, {len(enumerate_paths(net))} source-sink paths, max flow {g.f_star}")

for mode in ("generate", "enumerate"):
    start = time.perf_counter()
    lc = least_core(g, mode)
    x, trace = nucleolus(g, mode)
    took = time.perf_counter() - start
    pool = trace.rounds[-1].pool_size
    print(f"\n{mode}: least-core value {fmt(lc.epsilon)}, {len(trace.rounds)} rounds, "
          f"{pool} path constraints used, {took:.2f}s")
    print("  round values:", [fmt(e) for e in trace.epsilons])

print("\nnucleolus (edges out of s, middle edges, edges into t):")
for group in (["sa1", "sa2", "sa3"], ["a1b1", "a2b3", "b2c2"], ["c1t", "c2t", "c3t"]):
    print("  ", {p: fmt(x[p]) for p in group})
