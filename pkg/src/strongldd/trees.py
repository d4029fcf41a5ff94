"""Rooted forests with ancestor/subtree aggregation and path selection."""

from __future__ import annotations

from typing import Any, Callable, Optional, Sequence

import numpy as np


class ForestError(ValueError):
    pass


class RootedForest:
    """Parent-pointer forest over node ids ``0..n-1``.

    ``parent[v] == -1`` marks a root (if ``v`` is in the forest); nodes with
    ``in_forest[v] == False`` are ignored entirely.
    """

    def __init__(self, parent: Sequence[int], in_forest: Optional[Sequence[bool]] = None):
        parent = np.asarray(parent, dtype=np.int64)
        n = len(parent)
        if in_forest is None:
            in_forest = np.ones(n, dtype=bool)
        in_forest = np.asarray(in_forest, dtype=bool)
        for v in np.flatnonzero(in_forest):
            p = parent[v]
            if p >= 0 and (p >= n or not in_forest[p]):
                raise ForestError(f"parent of {v} is not in the forest")
        self.parent = parent
        self.in_forest = in_forest
        self.n = n
        self.order = self._topological_order()
        root_of = np.full(n, -1, dtype=np.int64)
        for v in self.order:
            p = parent[v]
            root_of[v] = v if p < 0 else root_of[p]
        self.root_of = root_of

    @classmethod
    def from_predecessors(cls, pred: Sequence[int], members) -> "RootedForest":
        """Forest on ``members``; predecessors outside ``members`` become roots."""
        n = len(pred)
        in_forest = np.zeros(n, dtype=bool)
        in_forest[list(members)] = True
        parent = np.full(n, -1, dtype=np.int64)
        for v in members:
            p = pred[v]
            if 0 <= p < n and in_forest[p]:
                parent[v] = p
        return cls(parent, in_forest)

    def _topological_order(self) -> list[int]:
        # roots first, every node after its parent
        children: list[list[int]] = [[] for _ in range(self.n)]
        roots = []
        for v in np.flatnonzero(self.in_forest).tolist():
            p = self.parent[v]
            if p < 0:
                roots.append(v)
            else:
                children[p].append(v)
        order = []
        stack = roots[::-1]
        while stack:
            u = stack.pop()
            order.append(u)
            stack.extend(reversed(children[u]))
        if len(order) != int(self.in_forest.sum()):
            raise ForestError("parent pointers contain a cycle")
        self.children = children
        return order

    def roots(self) -> list[int]:
        return [v for v in self.order if self.parent[v] < 0]


def subtree_sum(f: RootedForest, inputs: Sequence[Any],
                combine: Callable[[Any, Any], Any]) -> list:
    """Combine of ``inputs`` over each node's descendants (inclusive).

    Nodes outside the forest get ``None``.
    """
    out: list = [None] * f.n
    for v in f.order:
        out[v] = inputs[v]
    for v in reversed(f.order):
        p = f.parent[v]
        if p >= 0:
            out[p] = combine(out[p], out[v])
    return out


def ancestor_sum(f: RootedForest, inputs: Sequence[Any],
                 combine: Callable[[Any, Any], Any]) -> list:
    """Combine of ``inputs`` along each node's root path (inclusive), root first."""
    out: list = [None] * f.n
    for v in f.order:
        p = f.parent[v]
        out[v] = inputs[v] if p < 0 else combine(out[p], inputs[v])
    return out


def path_select(f: RootedForest, target: int) -> frozenset[int]:
    """Nodes on the root-to-``target`` path: those whose subtree holds ``target``."""
    if not (0 <= target < f.n) or not f.in_forest[target]:
        raise ForestError(f"node {target} is not in the forest")
    indicator = [0] * f.n
    indicator[target] = 1
    sums = subtree_sum(f, indicator, lambda a, b: a + b)
    return frozenset(v for v in f.order if sums[v] == 1)


def root_path(f: RootedForest, target: int) -> list[int]:
    """The root-to-``target`` path as an ordered node list."""
    members = path_select(f, target)
    out = [target]
    while f.parent[out[-1]] >= 0:
        out.append(int(f.parent[out[-1]]))
    out.reverse()
    assert set(out) == members
    return out
