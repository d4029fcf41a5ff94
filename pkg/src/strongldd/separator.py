"""Sampling weak path separators: remove short random tree paths with a thin margin."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import WeightedGraph, as_subset
from .oracle import Oracle, approx_set_sssp
from .sampling import log2_guard, pick_uniform
from .trees import RootedForest, path_select

SHRINK = 7.0 / 8.0


@dataclass
class WeakSeparator:
    entries: list = field(default_factory=list)      # (path, surround) pairs
    removed: frozenset = frozenset()
    iterations_run: int = 0
    verified: Optional[bool] = None
    potential_trace: list = field(default_factory=list)

    @property
    def paths(self) -> list:
        return [p for p, _ in self.entries]


def _ball_sizes(g: WeightedGraph, survivors, radius: float) -> dict:
    """Exact |B(v, radius)| in the subgraph induced by ``survivors``, via scipy."""
    from scipy.sparse.csgraph import dijkstra

    nodes = sorted(survivors)
    if not nodes:
        return {}
    sub = g.to_scipy(nodes)[nodes][:, nodes]
    d = dijkstra(sub, directed=False, limit=radius * (1 + 1e-12))
    counts = (d <= radius * (1 + 1e-12)).sum(axis=1)
    return dict(zip(nodes, counts.tolist()))


def verify_weak_separation(g: WeightedGraph, removed, diameter: float, active=None,
                           shrink: float = SHRINK):
    """``(ok, offender)``: is every surviving ball of radius ``diameter`` small?

    Small means at most ``shrink * n`` nodes, ``n`` being the size of the
    whole working set.  ``offender`` is the smallest violating node or None.
    """
    act = as_subset(active, g.n)
    n = len(act)
    sizes = _ball_sizes(g, act - as_subset(removed, g.n), diameter)
    for v in sorted(sizes):
        if sizes[v] > shrink * n:
            return False, v
    return True, None


def potential(g: WeightedGraph, residual, diameter: float, n: int, shrink: float = SHRINK) -> int:
    """Diagnostic: residual nodes whose ``2 * diameter`` ball is still large."""
    sizes = _ball_sizes(g, residual, 2.0 * diameter)
    return sum(1 for s in sizes.values() if s >= shrink * n)


def iteration_budget(n: int, epsilon: float, k_declared: int, c_sep: float = 768.0) -> int:
    return int(math.ceil(c_sep / epsilon * k_declared * log2_guard(n)))


def sample_weak_separator(g: WeightedGraph, active, diameter: float, epsilon: float,
                          k_declared: int, oracle: Optional[Oracle], rng: np.random.Generator,
                          c_sep: float = 768.0, check_every: Optional[int] = None,
                          track_potential: bool = False, shrink: float = SHRINK) -> WeakSeparator:
    """Repeatedly remove a random short path and everything within ``epsilon * diameter`` of it.

    Each iteration roots a 2-approximate shortest-path tree at a random
    residual node, takes the tree path to a random node within ``4 * diameter``
    and removes its neighbourhood measured in the full working graph.
    Stops after the iteration budget, when the residual is empty, or at a
    periodic exact check that already passes.
    """
    if not epsilon > 0 or epsilon > 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if not diameter > 0:
        raise ValueError("diameter must be positive")
    act = as_subset(active, g.n)
    n = len(act)
    budget = iteration_budget(max(n, 1), epsilon, max(1, k_declared), c_sep)
    every = check_every or max(1, math.ceil(log2_guard(max(n, 2))))
    out = WeakSeparator()
    removed: set = set()
    residual = act
    for t in range(budget):
        if not residual:
            break
        out.iterations_run = t + 1
        v = pick_uniform(residual, rng)
        tree = approx_set_sssp(g, residual, None, [v], 1.0, oracle)
        near = [w for w in residual if tree.dist[w] <= 4.0 * diameter]
        w = pick_uniform(near, rng)
        forest = RootedForest.from_predecessors(tree.pred, [u for u in residual if tree.reached(u)])
        path = sorted(path_select(forest, w), key=lambda u: tree.dist[u])
        assert path[0] == v and path[-1] == w
        length = sum(g.length(a, b) for a, b in zip(path, path[1:]))
        assert length <= 4.0 * diameter * (1 + 1e-9), "separator path too long"

        # measured in the working graph, not the residual
        margin = approx_set_sssp(g, act, None, path, 1.0, oracle)
        surround = frozenset(u for u in act if margin.dist[u] <= epsilon * diameter)
        out.entries.append((path, surround))
        removed |= surround
        residual = residual - surround
        if track_potential:
            out.potential_trace.append(potential(g, residual, diameter, n, shrink))
        if (t + 1) % every == 0 and residual:
            if verify_weak_separation(g, removed, diameter, act, shrink)[0]:
                break
    out.removed = frozenset(removed)
    out.verified = verify_weak_separation(g, out.removed, diameter, act, shrink)[0]
    return out
