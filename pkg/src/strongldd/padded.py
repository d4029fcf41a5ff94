"""Pseudo-padded decomposition by exponentially shifted starts from a super-source."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import WeightedGraph, as_subset, exact_sssp
from .oracle import Oracle, VirtualSourceSpec, approx_set_sssp
from .sampling import TexpParams, log2_guard, sample_texp
from .trees import RootedForest, ancestor_sum


class CoveringError(ValueError):
    """Some active node is too far from every center."""

    def __init__(self, node: int, distance: float, limit: float):
        super().__init__(f"node {node} is at super-source distance {distance} > {limit}; "
                         f"no center within the diameter parameter")
        self.node = node


@dataclass
class PaddedDecomposition:
    cluster_of: np.ndarray          # -1 outside the active set
    center_of_cluster: list
    shift_of_center: dict
    dist_via_source: np.ndarray
    diameter: float
    epsilon: float
    tau: int

    def clusters(self) -> list[frozenset]:
        members: list[list[int]] = [[] for _ in self.center_of_cluster]
        for v in np.flatnonzero(self.cluster_of >= 0).tolist():
            members[self.cluster_of[v]].append(v)
        return [frozenset(m) for m in members]


def shift_rate(tau: int) -> float:
    return 2.0 + 2.0 * log2_guard(tau)


def pseudo_padded_decompose(g: WeightedGraph, active, centers, diameter: float, tau: int,
                            epsilon: float, oracle: Optional[Oracle],
                            rng: np.random.Generator) -> PaddedDecomposition:
    """Every active node joins the center minimising ``(D - shift) + distance``.

    Shifts are ``D * Texp(2 + 2 log tau)``; a single SetSSP from a virtual
    source realises the minimum and the tree root under the source names
    the cluster.  Requires every active node within ``diameter`` of a center.
    """
    if not diameter > 0:
        raise ValueError("diameter must be positive")
    if tau < 1:
        raise ValueError("tau must be at least 1")
    if epsilon < 0 or epsilon > 1.0 / (40.0 * log2_guard(tau)):
        raise ValueError(f"epsilon {epsilon} outside [0, 1/(40 log tau)]")
    act = as_subset(active, g.n)
    cents = sorted(as_subset(centers, g.n))
    if not set(cents) <= act:
        raise ValueError("centers must be active nodes")
    n = g.n
    cluster_of = np.full(n, -1, dtype=np.int64)
    if not act:
        return PaddedDecomposition(cluster_of, [], {}, np.full(n, np.inf), diameter, epsilon, tau)
    if not cents:
        raise CoveringError(min(act), np.inf, 2 * (1 + epsilon) * diameter)

    shifts = sample_texp(TexpParams(shift_rate(tau), diameter), rng, size=len(cents))
    shift_of = {x: float(d) for x, d in zip(cents, shifts)}
    source = n
    virtuals = VirtualSourceSpec.star(n, {x: diameter - shift_of[x] for x in cents})
    res = approx_set_sssp(g, act, virtuals, [source], epsilon, oracle)
    dist = res.dist[:n]

    limit = 2.0 * (1.0 + epsilon) * diameter
    for v in sorted(act):
        if not dist[v] <= limit * (1 + 1e-12):
            raise CoveringError(v, float(dist[v]), limit)

    # tree children of the source are the cluster centers; broadcast their id
    forest = RootedForest.from_predecessors(res.pred, act)
    tag = [0] * n
    for r in forest.roots():
        tag[r] = r + 1
    labels = ancestor_sum(forest, tag, lambda a, b: a + b)
    if oracle is not None:
        oracle.count_aggregation()

    used = sorted({labels[v] - 1 for v in act})
    index = {x: i for i, x in enumerate(used)}
    for v in act:
        cluster_of[v] = index[labels[v] - 1]
    return PaddedDecomposition(cluster_of, used, {x: shift_of[x] for x in used},
                               res.dist[:n].copy(), diameter, epsilon, tau)


def padding_rate(g: WeightedGraph, centers, diameter: float, tau: int, epsilon: float,
                 gamma: float, trials: int, rng: np.random.Generator,
                 active=None, oracle: Optional[Oracle] = None) -> np.ndarray:
    """Monte-Carlo estimate, per node, of Pr[B(v, gamma*D) inside v's cluster].

    Inactive nodes get NaN.
    """
    if not 0 <= gamma <= 1.0 / 32:
        raise ValueError("gamma must lie in [0, 1/32]")
    if gamma > 0 and gamma < epsilon:
        raise ValueError("gamma must be at least epsilon")
    if trials < 1:
        raise ValueError("trials must be positive")
    act = as_subset(active, g.n)
    radius = gamma * diameter
    balls = {v: np.array(sorted(np.flatnonzero(exact_sssp(g, [v], act).dist <= radius)))
             for v in act}
    hits = np.zeros(g.n)
    for _ in range(trials):
        dec = pseudo_padded_decompose(g, act, centers, diameter, tau, epsilon, oracle, rng)
        c = dec.cluster_of
        for v, b in balls.items():
            if np.all(c[b] == c[v]):
                hits[v] += 1
    rate = np.full(g.n, np.nan)
    idx = sorted(act)
    rate[idx] = hits[idx] / trials
    return rate
