"""Clusters grown around separator paths, and their refinement into strong-diameter clusters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bbg import blur
from .clustering import Clustering
from .graph import WeightedGraph, as_subset
from .ldc import IterationCapError, build_ldc, build_ldd, iteration_cap
from .oracle import Oracle, approx_set_sssp
from .sampling import TexpParams, log2_guard, sample_texp, substream
from .separator import sample_weak_separator

# c_outer scales the coarse LDD diameter, c_sep_eps the separator margin, c_blur the blur radius
PROFILES = {
    "paper": {"c_outer": 100.0, "c_sep_eps": 10000.0, "c_blur": 16.0},
    "desk": {"c_outer": 2.0, "c_sep_eps": 10000.0, "c_blur": 16.0},
}


@dataclass
class BackboneClustering:
    """Partition of ``active`` into clusters, each with a list of backbone paths.

    Every member lies within ``pseudo_diameter`` of its cluster's backbone.
    """

    n: int
    active: frozenset
    cluster_of: np.ndarray
    members: list = field(default_factory=list)
    backbones: list = field(default_factory=list)
    round_of_cluster: list = field(default_factory=list)
    pseudo_diameter: float = 0.0
    rounds: int = 0
    params: dict = field(default_factory=dict)

    def add(self, members, paths, round_no):
        cid = len(self.members)
        for v in members:
            if self.cluster_of[v] != -1:
                raise ValueError(f"node {v} assigned to two backbone clusters")
            self.cluster_of[v] = cid
        self.members.append(frozenset(members))
        self.backbones.append([list(p) for p in paths])
        self.round_of_cluster.append(round_no)

    def backbone_nodes(self, cid: int) -> frozenset:
        return frozenset(v for p in self.backbones[cid] for v in p)

    @property
    def kappa(self) -> int:
        return max((len(b) for b in self.backbones), default=0)


def backbone_params(n: int, diameter: float, profile: str = "paper") -> dict:
    if profile not in PROFILES:
        raise ValueError(f"unknown constants profile {profile!r}")
    c = PROFILES[profile]
    logn = log2_guard(n)
    loglog = log2_guard(logn)
    return {
        "outer_diameter": c["c_outer"] * diameter * logn ** 2,
        "sep_epsilon": 1.0 / (c["c_sep_eps"] * logn ** 2),
        "reach": diameter / 4.0,
        "rho": diameter / (c["c_blur"] * loglog),
        "texp_rate": 4.0 * loglog,
        "profile": profile,
    }


def build_backbone_clustering(g: WeightedGraph, active, diameter: float, k_declared: int,
                              oracle: Optional[Oracle], rng: np.random.Generator,
                              profile: str = "paper", cap: Optional[int] = None) -> BackboneClustering:
    """Total clustering of ``active``; each member is within ``diameter`` of its backbone.

    Each round splits the residual by a coarse LDD, samples a weak
    separator in every part, grows a random-radius region around it, blurs
    it and emits the result as one cluster whose backbone is the
    separator's paths.
    """
    if not diameter > 0:
        raise ValueError("diameter must be positive")
    act = as_subset(active, g.n)
    size = max(1, len(act))
    p = backbone_params(size, diameter, profile)
    cap = iteration_cap(size) if cap is None else cap
    out = BackboneClustering(g.n, act, np.full(g.n, -1, dtype=np.int64),
                             pseudo_diameter=diameter, params=p)
    residual = act
    rounds = 0
    while residual:
        rounds += 1
        if rounds > cap:
            raise IterationCapError(f"backbone clustering did not finish in {cap} rounds")
        coarse = build_ldd(g, residual, p["outer_diameter"], oracle=oracle,
                           rng=substream(rng, "coarse", rounds))
        for part in coarse.clusters:
            prng = substream(rng, "part", rounds, part.id)
            sep = sample_weak_separator(g, part.members, p["outer_diameter"], p["sep_epsilon"],
                                        k_declared, oracle, prng)
            x = sample_texp(TexpParams(p["texp_rate"]), prng)
            eps = p["sep_epsilon"]
            res = approx_set_sssp(g, part.members, None, sep.removed, eps, oracle)
            region = frozenset(v for v in part.members
                               if res.dist[v] <= (1 + eps) * x * p["reach"])
            assert region >= sep.removed
            grown = blur(g, part.members, region, p["rho"], oracle, prng, eps).grown
            out.add(grown, sep.paths, rounds)
            residual = residual - grown
    out.rounds = rounds
    if oracle is not None:
        oracle.note_depth(rounds)
    return out


@dataclass
class PathNet:
    marks: list
    delta: float


def path_net(g: WeightedGraph, path, delta: float) -> PathNet:
    """Greedy net along ``path``: mark the first node, then the first node farther than ``delta`` from the last mark."""
    if not path:
        raise ValueError("cannot build a net on an empty path")
    if not delta > 0:
        raise ValueError("delta must be positive")
    marks = [path[0]]
    since = 0.0
    for a, b in zip(path, path[1:]):
        since += g.length(a, b)
        if since > delta:
            marks.append(b)
            since = 0.0
    return PathNet(marks, delta)


def refine(g: WeightedGraph, bc: BackboneClustering, oracle: Optional[Oracle],
           rng: np.random.Generator) -> Clustering:
    """Partial clustering with strong diameter at most ``16 * pseudo_diameter``.

    Net marks on each backbone serve as centers of one LDC run per
    backbone cluster, at diameter ``2 * pseudo_diameter``.
    """
    pd = bc.pseudo_diameter
    out = Clustering.empty(bc.n, bc.active)
    nets = []
    for cid, members in enumerate(bc.members):
        paths = bc.backbones[cid]
        if not paths:
            raise ValueError(f"backbone cluster {cid} has no backbone")
        cluster_nets = [path_net(g, path, pd) for path in paths]
        nets.append(cluster_nets)
        centers = frozenset(v for net in cluster_nets for v in net.marks)
        tau = len(paths) * max(len(net.marks) for net in cluster_nets)
        part = build_ldc(g, members, centers, 2.0 * pd, tau, oracle, substream(rng, "refine", cid))
        for c in part.clusters:
            out.add(c.members, center=c.center, diameter_bound=16.0 * pd,
                    backbone=paths, round=bc.round_of_cluster[cid])
    out.cut_edges = out.inter_cluster_edges(g)
    out.info["nets"] = nets
    return out


def marks_near(g: WeightedGraph, members, marks, radius: float) -> int:
    """Largest number of marks within ``radius`` of a single member (inside ``members``)."""
    from scipy.sparse.csgraph import dijkstra

    nodes = sorted(members)
    pos = {v: i for i, v in enumerate(nodes)}
    sub = g.to_scipy(nodes)[nodes][:, nodes]
    idx = [pos[m] for m in sorted(set(marks))]
    if not idx:
        return 0
    d = dijkstra(sub, directed=False, indices=idx, limit=radius * (1 + 1e-12))
    return int((d <= radius * (1 + 1e-12)).sum(axis=0).max())


def build_kpath_ldd(g: WeightedGraph, diameter: float, k_declared: int,
                    oracle: Optional[Oracle], rng: np.random.Generator,
                    profile: str = "paper", active=None) -> Clustering:
    """Total clustering with strong diameter at most ``diameter`` for k-path separable graphs."""

    def proc(g, residual, oracle, rng):
        bc = build_backbone_clustering(g, residual, diameter / 16.0, k_declared, oracle,
                                       substream(rng, "backbone"), profile=profile)
        return refine(g, bc, oracle, substream(rng, "refine"))

    return build_ldd(g, active, diameter, ldc=proc, oracle=oracle, rng=rng)

