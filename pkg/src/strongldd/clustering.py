"""Clustering results shared by the LDC, LDD and backbone drivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import WeightedGraph


@dataclass
class Cluster:
    id: int
    members: frozenset
    center: Optional[int]
    diameter_bound: float
    backbone: Optional[list] = None
    round: int = 0


@dataclass
class Clustering:
    """Disjoint clusters over ``active``; ``cluster_of[v] == -1`` means unclustered.

    ``cut_edges`` are edge ids decided as cut by the producing algorithm.
    """

    n: int
    active: frozenset
    cluster_of: np.ndarray
    clusters: list
    cut_edges: list = field(default_factory=list)
    depth: int = 1
    info: dict = field(default_factory=dict, repr=False)

    @classmethod
    def empty(cls, n: int, active) -> "Clustering":
        return cls(n, frozenset(active), np.full(n, -1, dtype=np.int64), [])

    def add(self, members, center=None, diameter_bound=np.inf, backbone=None, round=0) -> Cluster:
        cid = len(self.clusters)
        c = Cluster(cid, frozenset(members), center, diameter_bound, backbone, round)
        for v in c.members:
            if self.cluster_of[v] != -1:
                raise ValueError(f"node {v} assigned to two clusters")
            self.cluster_of[v] = cid
        self.clusters.append(c)
        return c

    @property
    def clustered(self) -> frozenset:
        return frozenset(np.flatnonzero(self.cluster_of >= 0).tolist())

    def is_total(self) -> bool:
        return all(self.cluster_of[v] >= 0 for v in self.active)

    def clustered_fraction(self) -> float:
        if not self.active:
            return 1.0
        return sum(1 for v in self.active if self.cluster_of[v] >= 0) / len(self.active)

    def inter_cluster_edges(self, g: WeightedGraph) -> list[int]:
        """Edges inside ``active`` whose endpoints are not in one common cluster
        while at least one endpoint is clustered."""
        c = self.cluster_of
        out = []
        for eid, (a, b) in enumerate(zip(g.edges_u.tolist(), g.edges_v.tolist())):
            if a in self.active and b in self.active and c[a] != c[b]:
                out.append(eid)
        return out

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "cluster_of": [int(x) for x in self.cluster_of],
            "clusters": [
                {"id": c.id, "members": sorted(int(v) for v in c.members),
                 "center": None if c.center is None else int(c.center),
                 "diameter_bound": float(c.diameter_bound),
                 "round": int(c.round),
                 **({"backbone": [[int(v) for v in p] for p in c.backbone]}
                    if c.backbone is not None else {})}
                for c in self.clusters],
            "cut_edges": sorted(int(e) for e in self.cut_edges),
            "depth": int(self.depth),
        }
