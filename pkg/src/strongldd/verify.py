"""Independent checks and statistics for clusterings, separators and Monte-Carlo runs.

Distances here come from scipy, never from this package's Dijkstra, so the
checks do not share code with what they check.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import dijkstra as sp_dijkstra
from scipy.stats import norm

from .clustering import Clustering
from .graph import WeightedGraph, as_subset, connected_components

SCHEMA_VERSION = 1
BRUTE_FORCE_LIMIT = 512
SAMPLED_PAIRS = 1000


@dataclass
class RunStats:
    per_edge_cut_count: np.ndarray
    trials: int
    counters: dict = field(default_factory=dict)
    max_cluster_strong_diameter: float = 0.0
    recursion_depth: int = 0
    clustered_fraction_per_trial: list = field(default_factory=list)
    depth_per_trial: list = field(default_factory=list)
    sssp_calls_per_trial: list = field(default_factory=list)

    def __post_init__(self):
        if np.any(self.per_edge_cut_count > self.trials):
            raise ValueError("an edge cannot be cut more often than there are trials")

    def rates(self) -> np.ndarray:
        return self.per_edge_cut_count / self.trials


def strong_diameter(g: WeightedGraph, members, rng: Optional[np.random.Generator] = None):
    """``(diameter, exact)`` of the subgraph induced by ``members``.

    Disconnected members give ``inf``.  Above the brute-force limit only
    sampled pairs are measured and ``exact`` is False (a lower bound).
    """
    nodes = sorted(members)
    if len(nodes) <= 1:
        return 0.0, True
    sub = g.to_scipy(nodes)[nodes][:, nodes]
    if len(nodes) <= BRUTE_FORCE_LIMIT:
        return float(sp_dijkstra(sub, directed=False).max()), True
    rng = rng or np.random.default_rng(0)
    src = rng.integers(0, len(nodes), SAMPLED_PAIRS)
    dst = rng.integers(0, len(nodes), SAMPLED_PAIRS)
    uniq, inv = np.unique(src, return_inverse=True)
    d = sp_dijkstra(sub, directed=False, indices=uniq)
    return float(d[inv, dst].max()), False


@dataclass
class AuditReport:
    violations: list = field(default_factory=list)
    max_strong_diameter: float = 0.0
    exact: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "ok": self.ok,
                "violations": self.violations,
                "max_strong_diameter": self.max_strong_diameter, "exact": self.exact}


def audit_clustering(g: WeightedGraph, c: Clustering, expect_total: bool = False,
                     diameter_bound: Optional[float] = None, active=None) -> AuditReport:
    """List every broken clustering property; an empty list means valid."""
    act = as_subset(c.active if active is None else active, g.n)
    rep = AuditReport()
    seen: dict[int, int] = {}
    for cl in c.clusters:
        for v in cl.members:
            if v in seen:
                rep.violations.append({"kind": "overlap", "node": v,
                                       "clusters": [seen[v], cl.id]})
            seen[v] = cl.id
            if v not in act:
                rep.violations.append({"kind": "outside_active", "node": v, "cluster": cl.id})
            if c.cluster_of[v] != cl.id:
                rep.violations.append({"kind": "label_mismatch", "node": v, "cluster": cl.id})
    for v in np.flatnonzero(c.cluster_of >= 0).tolist():
        if v not in seen:
            rep.violations.append({"kind": "label_without_cluster", "node": v})
    if expect_total:
        missing = sorted(v for v in act if v not in seen)
        if missing:
            rep.violations.append({"kind": "not_total", "nodes": missing})
    for cl in c.clusters:
        if len(connected_components(g, cl.members)) > 1:
            rep.violations.append({"kind": "disconnected", "cluster": cl.id})
            continue
        diam, exact = strong_diameter(g, cl.members)
        rep.exact &= exact
        rep.max_strong_diameter = max(rep.max_strong_diameter, diam)
        if diameter_bound is not None and diam > diameter_bound * (1 + 1e-9):
            rep.violations.append({"kind": "diameter", "cluster": cl.id,
                                   "diameter": diam, "bound": diameter_bound})
    return rep


def audit_backbone(g: WeightedGraph, bc, bound: Optional[float] = None) -> list:
    """Members farther than ``bound`` (default: the pseudo-diameter) from their backbone."""
    bound = bc.pseudo_diameter if bound is None else bound
    bad = []
    for cid, members in enumerate(bc.members):
        nodes = sorted(members)
        pos = {v: i for i, v in enumerate(nodes)}
        back = bc.backbone_nodes(cid)
        if not back:
            bad.append({"kind": "empty_backbone", "cluster": cid})
            continue
        if not back <= members:
            bad.append({"kind": "backbone_outside", "cluster": cid})
            continue
        sub = g.to_scipy(nodes)[nodes][:, nodes]
        d = sp_dijkstra(sub, directed=False, indices=[pos[b] for b in sorted(back)],
                        min_only=True)
        for v, dv in zip(nodes, d):
            if dv > bound * (1 + 1e-9):
                bad.append({"kind": "far_from_backbone", "cluster": cid, "node": v,
                            "distance": float(dv)})
    return bad


def wilson_interval(successes: int, trials: int, confidence: float = 0.95):
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = norm.ppf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    mid = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, mid - half), min(1.0, mid + half)


def ci_cut_rate(stats: RunStats, edge: int, confidence: float = 0.95):
    """Wilson interval for one edge's cut probability; needs at least 30 trials."""
    if stats.trials < 30:
        raise ValueError("at least 30 trials are needed for an interval")
    return wilson_interval(int(stats.per_edge_cut_count[edge]), stats.trials, confidence)


def cut_rates_csv(g: WeightedGraph, stats: RunStats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema_version", "edge", "u", "v", "length", "cuts", "trials", "rate",
                "ci_low", "ci_high"])
    for eid, (u, v, length) in enumerate(g.edges()):
        k = int(stats.per_edge_cut_count[eid])
        lo, hi = wilson_interval(k, stats.trials)
        w.writerow([SCHEMA_VERSION, eid, u, v, repr(float(length)), k, stats.trials,
                    f"{k / stats.trials:.6f}", f"{lo:.6f}", f"{hi:.6f}"])
    return buf.getvalue()


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"
