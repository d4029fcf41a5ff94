"""Seeded synthetic graph families used as test corpora.

Each family carries a declared path-separability ``k`` so separator and
backbone routines can be fed trusted inputs (see :func:`declared_k`).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .graph import WeightedGraph

KINDS = ("path", "wpath", "grid", "tree", "random", "ktree")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _weight(rng, max_weight: float) -> float:
    if max_weight <= 1:
        return 1.0
    return float(rng.uniform(1.0, max_weight))


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, ((i, i + 1, 1.0) for i in range(n - 1)))


def weighted_path(n: int, seed=None, max_weight: float = 10.0) -> WeightedGraph:
    rng = _rng(seed)
    return WeightedGraph(n, [(i, i + 1, _weight(rng, max_weight)) for i in range(n - 1)],
                         weight_cap=max(max_weight, n ** 3))


def grid_graph(n: int) -> WeightedGraph:
    side = math.isqrt(n)
    if side * side != n:
        raise ValueError(f"grid needs a square node count, got {n}")
    edges = []
    for r in range(side):
        for c in range(side):
            v = r * side + c
            if c + 1 < side:
                edges.append((v, v + 1, 1.0))
            if r + 1 < side:
                edges.append((v, v + side, 1.0))
    return WeightedGraph(n, edges)


def random_tree(n: int, seed=None, max_weight: float = 1.0) -> WeightedGraph:
    """Random recursive tree: node ``i`` hangs off a uniform earlier node."""
    rng = _rng(seed)
    edges = [(int(rng.integers(0, i)), i, _weight(rng, max_weight)) for i in range(1, n)]
    return WeightedGraph(n, edges, weight_cap=max(max_weight, n ** 3))


def random_connected(n: int, seed=None, max_weight: float = 10.0,
                     extra_edges: Optional[int] = None) -> WeightedGraph:
    """Random spanning tree plus ``extra_edges`` chords, weights uniform in [1, W]."""
    rng = _rng(seed)
    if extra_edges is None:
        extra_edges = n
    edges = {}
    perm = rng.permutation(n)
    for i in range(1, n):
        a, b = int(perm[i]), int(perm[rng.integers(0, i)])
        edges[(min(a, b), max(a, b))] = _weight(rng, max_weight)
    budget = n * (n - 1) // 2 - len(edges)
    tries = 0
    while extra_edges > 0 and budget > 0 and tries < 50 * n:
        tries += 1
        a, b = (int(x) for x in rng.integers(0, n, size=2))
        if a == b or (min(a, b), max(a, b)) in edges:
            continue
        edges[(min(a, b), max(a, b))] = _weight(rng, max_weight)
        extra_edges -= 1
        budget -= 1
    return WeightedGraph(n, [(a, b, w) for (a, b), w in sorted(edges.items())],
                         weight_cap=max(max_weight, n ** 3))


def ktree(n: int, width: int = 2, seed=None, max_weight: float = 1.0) -> WeightedGraph:
    """Random ``width``-tree: a (width+1)-clique grown by attaching each new
    node to a uniformly chosen existing ``width``-clique.  Treewidth is
    ``width`` (smaller if ``n <= width``)."""
    if width < 1:
        raise ValueError("width must be >= 1")
    rng = _rng(seed)
    base = min(n, width + 1)
    edges = {}
    for a in range(base):
        for b in range(a + 1, base):
            edges[(a, b)] = _weight(rng, max_weight)
    cliques = []
    if n > width:
        full = tuple(range(width + 1))
        cliques = [tuple(x for x in full if x != drop) for drop in full]
    for v in range(base, n):
        clique = cliques[int(rng.integers(0, len(cliques)))]
        for u in clique:
            edges[(u, v)] = _weight(rng, max_weight)
        for drop in clique:
            cliques.append(tuple(sorted([x for x in clique if x != drop] + [v])))
    return WeightedGraph(n, [(a, b, w) for (a, b), w in sorted(edges.items())],
                         weight_cap=max(max_weight, n ** 3))


def generate(kind: str, n: int, seed=0, **params) -> WeightedGraph:
    """Build a graph of the named family; deterministic in ``seed``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "path":
        return path_graph(n)
    if kind == "wpath":
        return weighted_path(n, seed, **params)
    if kind == "grid":
        return grid_graph(n)
    if kind == "tree":
        return random_tree(n, seed, **params)
    if kind == "random":
        return random_connected(n, seed, **params)
    if kind == "ktree":
        return ktree(n, seed=seed, **params)
    raise ValueError(f"unknown graph kind {kind!r}; expected one of {KINDS}")


def declared_k(kind: str, **params) -> int:
    """Trusted path-separability of a generated family."""
    if kind in ("path", "wpath", "tree"):
        return 1
    if kind == "grid":
        return 3
    if kind == "ktree":
        return int(params.get("width", 2))
    raise ValueError(f"no separability declaration for {kind!r}")
