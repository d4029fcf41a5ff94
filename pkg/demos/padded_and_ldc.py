"""Walk through one padded decomposition and the clustering built on top of it."""

import numpy as np

from strongldd import Oracle, build_ldc, generate, make_rng, pseudo_padded_decompose
from strongldd.verify import strong_diameter

g = generate("grid", 64)  # 8 x 8 unit grid
rng = make_rng(2024, "demo")

# every node is a center; each node joins the center with the best shifted distance
D = 4.0
dec = pseudo_padded_decompose(g, None, range(g.n), D, g.n, 0.0, None, rng)
sizes = [len(c) for c in dec.clusters()]
print("padded clusters:", len(sizes), "largest:", max(sizes))
print("worst strong diameter:", max(strong_diameter(g, c)[0] for c in dec.clusters()),
      "bound:", 4 * D)

# the grid drawn as cluster ids
print(dec.cluster_of.reshape(8, 8))

# partial clustering: boundary-hugging nodes may drop out
oracle = Oracle()
c = build_ldc(g, None, range(g.n), D, g.n, oracle, rng)
print("clustered fraction:", c.clustered_fraction())
print("oracle calls for one application:", oracle.counters.sssp_calls)
print(np.where(c.cluster_of >= 0, c.cluster_of, -1).reshape(8, 8))
