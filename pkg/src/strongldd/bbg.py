"""Blurry ball growing: grow a node set by a random radius of at most ``rho``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import WeightedGraph, as_subset
from .oracle import Oracle, approx_set_sssp


@dataclass
class BlurResult:
    grown: frozenset
    threshold_used: float
    cut_edges: list


def blur(g: WeightedGraph, active, seed_set, rho: float, oracle: Optional[Oracle],
         rng: np.random.Generator, epsilon: float = 0.0,
         threshold: Optional[float] = None) -> BlurResult:
    """Superset of ``seed_set``: active nodes with oracle distance <= r, r ~ U(0, rho].

    One oracle call.  An edge of length ``l`` separates the result with
    probability at most ``(1 + epsilon) * l / rho``; every added node is
    within exact distance ``rho`` of the seed set.  ``threshold`` forces r.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    act = as_subset(active, g.n)
    seeds = as_subset(seed_set, g.n)
    if not seeds:
        raise ValueError("seed set must be nonempty")
    if not seeds <= act:
        raise ValueError("seed set must lie inside the active set")
    # 1 - U with U in [0, 1) lands in (0, 1]
    r = rho * (1.0 - rng.random()) if threshold is None else float(threshold)
    res = approx_set_sssp(g, act, None, seeds, epsilon, oracle)
    dist = res.dist
    grown = seeds | frozenset(v for v in act if dist[v] <= r)
    cut = [eid for eid, (a, b) in enumerate(zip(g.edges_u.tolist(), g.edges_v.tolist()))
           if a in act and b in act and ((a in grown) != (b in grown))]
    return BlurResult(grown, r, cut)
