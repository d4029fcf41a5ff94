"""Approximate set-source shortest paths with virtual nodes.

Two backends share one contract: distances never underestimate, stay
within ``(1 + eps)`` of exact, and telescope exactly along the returned
predecessor forest.  ``exact`` is plain Dijkstra on the augmented graph;
``perturbed`` inflates distances by seeded random factors and re-picks
predecessors so the forest stays consistent, to stress eps-tolerant logic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .graph import INF, SsspResult, WeightedGraph, as_subset, dijkstra, restricted_neighbors
from .sampling import make_rng


@dataclass
class OracleCounters:
    sssp_calls: int = 0
    aggregation_passes: int = 0
    max_recursion_depth: int = 0

    def as_dict(self) -> dict:
        return {"sssp_calls": self.sssp_calls,
                "aggregation_passes": self.aggregation_passes,
                "max_recursion_depth": self.max_recursion_depth}


@dataclass
class VirtualSourceSpec:
    """Virtual nodes ``n, n+1, ...`` and their edges ``(virtual_id, target, weight)``.

    ``target`` may be a real node or another virtual node.
    """

    virtual_count: int = 0
    virtual_edges: list = field(default_factory=list)

    @classmethod
    def star(cls, n: int, weights: dict) -> "VirtualSourceSpec":
        """One virtual node ``n`` joined to each key of ``weights``."""
        return cls(1, [(n, int(v), float(w)) for v, w in sorted(weights.items())])


class Oracle:
    """Stateful wrapper: backend choice, per-run counters, perturbation seed.

    One oracle per run (or per Monte-Carlo worker); nothing is shared.
    """

    BACKENDS = ("exact", "perturbed")

    def __init__(self, backend: str = "exact", seed: int = 0,
                 virtual_cap: Optional[int] = None):
        if backend not in self.BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.seed = seed
        self.virtual_cap = virtual_cap
        self.counters = OracleCounters()
        self._perturb_calls = 0

    def counters_snapshot(self) -> OracleCounters:
        return replace(self.counters)

    def counters_reset(self) -> None:
        self.counters = OracleCounters()

    def count_aggregation(self, passes: int = 1) -> None:
        self.counters.aggregation_passes += passes

    def note_depth(self, depth: int) -> None:
        self.counters.max_recursion_depth = max(self.counters.max_recursion_depth, depth)

    def sssp(self, g: WeightedGraph, sources: Iterable[int], active=None,
             epsilon: float = 0.0, virtuals: Optional[VirtualSourceSpec] = None,
             labels: Optional[Sequence[int]] = None) -> SsspResult:
        return approx_set_sssp(g, active, virtuals, sources, epsilon, self, labels=labels)


def _augmented_neighbors(g: WeightedGraph, act, labels, virtuals: VirtualSourceSpec):
    base = restricted_neighbors(g, act, labels)
    n = g.n
    extra: dict[int, list[tuple[int, float]]] = {}
    for vid, target, w in virtuals.virtual_edges:
        extra.setdefault(vid, []).append((target, w))
        extra.setdefault(target, []).append((vid, w))
    for row in extra.values():
        row.sort()

    def nb(u):
        if u < n:
            yield from base(u)
        yield from extra.get(u, ())

    return nb


def approx_set_sssp(g: WeightedGraph, active, virtuals: Optional[VirtualSourceSpec],
                    sources: Iterable[int], epsilon: float, oracle: Optional[Oracle] = None,
                    labels: Optional[Sequence[int]] = None) -> SsspResult:
    """(1 + eps)-approximate distances from ``sources`` on ``G[active]`` plus virtuals.

    ``labels`` (optional, per real node) drops edges between differently
    labelled nodes, which is how callers exclude inter-cluster edges.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    virtuals = virtuals or VirtualSourceSpec()
    n = g.n
    total = n + virtuals.virtual_count
    act = as_subset(active, n)
    if oracle is not None and oracle.virtual_cap is not None and virtuals.virtual_count > oracle.virtual_cap:
        raise ValueError("too many virtual nodes for this oracle")
    for vid, target, w in virtuals.virtual_edges:
        if not n <= vid < total:
            raise ValueError(f"virtual id {vid} outside [{n}, {total})")
        if not 0 <= target < total:
            raise ValueError(f"virtual edge target {target} out of range")
        if target < n and target not in act:
            raise ValueError(f"virtual edge references inactive node {target}")
        if not 0 <= w < INF:
            raise ValueError(f"virtual edge weight {w} must be finite and non-negative")
    src = frozenset(int(s) for s in sources)
    if not src:
        raise ValueError("source set must be nonempty")
    for s in src:
        if s < n and s not in act:
            raise ValueError(f"source {s} is outside the active set")
        if not 0 <= s < total:
            raise ValueError(f"source {s} is neither a node nor a virtual node")

    nb = _augmented_neighbors(g, act, labels, virtuals)
    dist, pred, order = dijkstra(total, sorted(src), nb)
    if oracle is not None:
        oracle.counters.sssp_calls += 1
        if oracle.backend == "perturbed" and epsilon > 0:
            rng = make_rng(oracle.seed, "perturb", oracle._perturb_calls)
            oracle._perturb_calls += 1
            dist, pred = _perturb(dist, pred, order, src, nb, epsilon, rng)
    return SsspResult(dist, pred, src, n, order)


def _perturb(exact, exact_pred, order, src, nb, epsilon, rng):
    """Inflate each distance toward ``exact * U[1, 1+eps]`` keeping a valid tree.

    Nodes are revisited in exact settle order; each picks, among neighbours
    already fixed, the one whose ``dist + length`` lands closest to its
    target while staying within ``(1 + eps) * exact``.  The exact
    predecessor is always admissible, so a choice always exists.
    """
    total = len(exact)
    dist = np.full(total, INF)
    pred = np.full(total, -1, dtype=np.int64)
    factors = 1.0 + epsilon * rng.random(total)
    fixed = np.zeros(total, dtype=bool)
    for v in order:
        if v in src:
            dist[v] = 0.0
            fixed[v] = True
            continue
        target = exact[v] * factors[v]
        cap = exact[v] * (1.0 + epsilon)
        best_u, best_d, best_gap = int(exact_pred[v]), None, INF
        for u, w in nb(v):
            if not fixed[u]:
                continue
            cand = dist[u] + w
            if cand > cap * (1 + 1e-12):
                continue
            gap = abs(cand - target)
            if gap < best_gap or (gap == best_gap and u < best_u):
                best_u, best_d, best_gap = u, cand, gap
        if best_d is None:
            raise RuntimeError(f"no admissible predecessor for node {v}")
        dist[v] = best_d
        pred[v] = best_u
        fixed[v] = True
    return dist, pred
