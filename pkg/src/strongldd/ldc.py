"""Strong-diameter clustering (LDC) and the decomposition driver (LDD) built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bbg import blur
from .clustering import Clustering
from .graph import INF, WeightedGraph, as_subset
from .oracle import Oracle, VirtualSourceSpec, approx_set_sssp
from .padded import pseudo_padded_decompose
from .sampling import log2_guard, make_rng, substream


class IterationCapError(RuntimeError):
    """The residual never emptied; the clustering procedure is not doing its job."""


def ldc_epsilon(tau: int) -> float:
    return 1.0 / (1024.0 * log2_guard(tau))


def build_ldc(g: WeightedGraph, active, centers, diameter: float, tau: int,
              oracle: Optional[Oracle], rng: np.random.Generator,
              c_blur: float = 128.0, alpha: float = 0.0,
              epsilon: Optional[float] = None) -> Clustering:
    """Partial clustering with strong diameter at most ``8 * diameter``.

    Runs a padded decomposition, keeps nodes far from every cluster
    boundary, blurs that core a little and re-grows clusters inside it
    from their centers.  Nodes dropped along the way stay unclustered.
    """
    act = as_subset(active, g.n)
    out = Clustering.empty(g.n, act)
    if not act:
        return out
    eps = ldc_epsilon(tau) if epsilon is None else epsilon
    logt = log2_guard(tau)
    n = g.n

    # padded clusters
    pad = pseudo_padded_decompose(g, act, centers, diameter, tau, eps, oracle,
                                  substream(rng, "padded"))
    labels = pad.cluster_of

    # distance to the nearest cross-cluster edge, measured inside clusters
    omega = {}
    for v in act:
        for u, w, _ in g.adj[v]:
            if u in act and labels[u] != labels[v]:
                omega[v] = min(omega.get(v, INF), w)
    if oracle is not None:
        oracle.count_aggregation()
    if omega:
        res = approx_set_sssp(g, act, VirtualSourceSpec.star(n, omega), [n], eps, oracle,
                              labels=labels)
        to_boundary = res.dist[:n]
    else:
        to_boundary = np.full(n, INF)

    rho = (1.0 - alpha) * diameter / (c_blur * logt)
    threshold = rho / (1.0 - alpha) + eps * diameter
    inner = frozenset(v for v in act if to_boundary[v] >= threshold)
    if oracle is not None:
        oracle.count_aggregation()
    live_centers = [x for x in pad.center_of_cluster if x in inner]
    out.info.update(padded=pad, to_boundary=to_boundary, rho=rho, epsilon=eps,
                    inner=inner, core=frozenset(), grown=frozenset())
    if not live_centers:
        return out

    # nodes of the inner set still close to their own center
    res = approx_set_sssp(g, inner, None, live_centers, eps, oracle, labels=labels)
    core = frozenset(v for v in inner if res.dist[v] <= 3.0 * diameter)

    grown = blur(g, act, core, rho, oracle, substream(rng, "blur"), eps).grown

    # final clusters: grow from the surviving centers inside the blurred set
    res = approx_set_sssp(g, grown, None, live_centers, eps, oracle, labels=labels)
    members: dict[int, list[int]] = {}
    for v in sorted(grown):
        if res.dist[v] < INF:
            members.setdefault(int(labels[v]), []).append(v)
    for lab in sorted(members):
        out.add(members[lab], center=pad.center_of_cluster[lab], diameter_bound=8.0 * diameter)
    out.cut_edges = out.inter_cluster_edges(g)
    out.info.update(core=core, grown=grown)
    return out


LdcProcedure = Callable[[WeightedGraph, frozenset, Optional[Oracle], np.random.Generator], Clustering]


def default_ldc(diameter: float, tau: int) -> LdcProcedure:
    """The general-graph instance: LDC at ``diameter / 8`` with every residual node a center."""

    def proc(g, residual, oracle, rng):
        return build_ldc(g, residual, residual, diameter / 8.0, tau, oracle, rng)

    return proc


def iteration_cap(n: int) -> int:
    return int(math.ceil(64 * log2_guard(n)))


def build_ldd(g: WeightedGraph, active, diameter: float, ldc: Optional[LdcProcedure] = None,
              oracle: Optional[Oracle] = None, rng: Optional[np.random.Generator] = None,
              cap: Optional[int] = None) -> Clustering:
    """Total clustering: apply ``ldc`` to the unclustered residual until it is empty.

    Edges touching freshly clustered nodes leave the instance in that
    round, and whether they are cut is decided then.
    """
    act = as_subset(active, g.n)
    rng = rng if rng is not None else make_rng(0, "ldd")
    size = max(1, len(act))
    ldc = ldc or default_ldc(diameter, size)
    cap = iteration_cap(size) if cap is None else cap
    out = Clustering.empty(g.n, act)
    residual = act
    rounds = 0
    while residual:
        rounds += 1
        if rounds > cap:
            raise IterationCapError(f"{len(residual)} nodes still unclustered after {cap} rounds")
        part = ldc(g, residual, oracle, substream(rng, "round", rounds))
        for c in part.clusters:
            out.add(c.members, center=c.center, diameter_bound=c.diameter_bound,
                    backbone=c.backbone, round=rounds)
        out.cut_edges.extend(part.cut_edges)
        residual = residual - part.clustered
    out.depth = rounds
    if oracle is not None:
        oracle.note_depth(rounds)
    out.cut_edges.sort()
    return out


@dataclass(frozen=True)
class DriverConfig:
    """What one Monte-Carlo trial runs; plain data so it can cross process boundaries."""

    algorithm: str = "ldd"          # ldd | ldc | kpath-ldd
    diameter: float = 1.0
    k_declared: int = 1
    profile: str = "desk"
    backend: str = "exact"

    def as_dict(self) -> dict:
        return {"algorithm": self.algorithm, "diameter": self.diameter,
                "k_declared": self.k_declared, "profile": self.profile,
                "backend": self.backend}


def run_driver(g: WeightedGraph, cfg: DriverConfig, seed: int, trial: int = 0):
    """One seeded run; returns ``(clustering, counters)``."""
    oracle = Oracle(cfg.backend, seed=int(make_rng(seed, "oracle", trial).integers(2 ** 32)))
    rng = make_rng(seed, "trial", trial)
    if cfg.algorithm == "ldd":
        c = build_ldd(g, None, cfg.diameter, oracle=oracle, rng=rng)
    elif cfg.algorithm == "ldc":
        c = build_ldc(g, None, None, cfg.diameter, g.n, oracle, rng)
    elif cfg.algorithm == "kpath-ldd":
        from .backbone import build_kpath_ldd
        c = build_kpath_ldd(g, cfg.diameter, cfg.k_declared, oracle, rng, profile=cfg.profile)
    else:
        raise ValueError(f"unknown algorithm {cfg.algorithm!r}")
    return c, oracle.counters_snapshot()


def _trial_block(args):
    g, cfg, seed, trials = args
    counts = np.zeros(g.m, dtype=np.int64)
    fractions, depths, calls = [], [], []
    for t in trials:
        c, counters = run_driver(g, cfg, seed, t)
        cut = c.inter_cluster_edges(g)
        counts[cut] += 1
        fractions.append(c.clustered_fraction())
        depths.append(c.depth)
        calls.append(counters.sssp_calls)
    return counts, fractions, depths, calls


def measure_cut_rates(g: WeightedGraph, cfg: DriverConfig, trials: int, seed: int = 0,
                      jobs: int = 1):
    """Per-edge cut counts over ``trials`` seeded runs, as :class:`RunStats`.

    Trial ``t`` depends only on ``(seed, t)``, so the result is identical
    for any ``jobs``.
    """
    from .verify import RunStats

    if trials < 1:
        raise ValueError("trials must be positive")
    idx = list(range(trials))
    if jobs <= 1:
        blocks = [_trial_block((g, cfg, seed, idx))]
    else:
        from concurrent.futures import ProcessPoolExecutor
        chunks = [idx[i::jobs] for i in range(jobs) if idx[i::jobs]]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            blocks = list(ex.map(_trial_block, [(g, cfg, seed, ch) for ch in chunks]))
        order = [t for ch in chunks for t in ch]
    counts = sum(b[0] for b in blocks)
    fractions = [x for b in blocks for x in b[1]]
    depths = [x for b in blocks for x in b[2]]
    calls = [x for b in blocks for x in b[3]]
    if jobs > 1:
        perm = np.argsort(order)
        fractions = [fractions[i] for i in perm]
        depths = [depths[i] for i in perm]
        calls = [calls[i] for i in perm]
    return RunStats(per_edge_cut_count=np.asarray(counts, dtype=np.int64), trials=trials,
                    recursion_depth=max(depths), clustered_fraction_per_trial=fractions,
                    depth_per_trial=depths, sssp_calls_per_trial=calls)
