"""Weighted undirected graphs, exact shortest paths, balls and components."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

INF = math.inf


class GraphError(ValueError):
    """Malformed graph input (bad ids, non-positive or oversized lengths)."""


def default_weight_cap(n: int) -> float:
    return float(max(n, 1)) ** 3


class WeightedGraph:
    """Immutable undirected graph on nodes ``0..n-1`` with positive edge lengths.

    Every edge is stored once as ``(u, v, length)`` with ``u < v``; ``adj[v]``
    lists ``(neighbor, length, edge_id)`` triples in both directions.
    """

    __slots__ = ("n", "edges_u", "edges_v", "lengths", "adj", "weight_cap", "_index")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]],
                 weight_cap: Optional[float] = None):
        if n < 0:
            raise GraphError("node count must be non-negative")
        cap = default_weight_cap(n) if weight_cap is None else float(weight_cap)
        us, vs, ws = [], [], []
        index: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a node outside [0, {n})")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not w > 0 or math.isinf(w):
                raise GraphError(f"edge ({u}, {v}) has non-positive length {w}")
            if w > cap:
                raise GraphError(f"edge ({u}, {v}) length {w} exceeds cap {cap}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in index:
                raise GraphError(f"duplicate edge ({a}, {b})")
            index[(a, b)] = len(us)
            us.append(a)
            vs.append(b)
            ws.append(w)
        self.n = n
        self.edges_u = np.array(us, dtype=np.int64)
        self.edges_v = np.array(vs, dtype=np.int64)
        self.lengths = np.array(ws, dtype=np.float64)
        self.weight_cap = cap
        self._index = index
        adj: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
        for eid, (a, b, w) in enumerate(zip(us, vs, ws)):
            adj[a].append((b, w, eid))
            adj[b].append((a, w, eid))
        for row in adj:
            row.sort()
        self.adj = adj
        for arr in (self.edges_u, self.edges_v, self.lengths):
            arr.flags.writeable = False

    @property
    def m(self) -> int:
        return len(self.lengths)

    def edges(self) -> Iterable[tuple[int, int, float]]:
        for a, b, w in zip(self.edges_u.tolist(), self.edges_v.tolist(), self.lengths.tolist()):
            yield a, b, w

    def edge_id(self, u: int, v: int) -> int:
        a, b = (u, v) if u < v else (v, u)
        return self._index[(a, b)]

    def length(self, u: int, v: int) -> float:
        return float(self.lengths[self.edge_id(u, v)])

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if u < v else (v, u)
        return (a, b) in self._index

    def nodes(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def total_length(self) -> float:
        return float(self.lengths.sum())

    def induced_edges(self, nodes: Iterable[int]) -> list[int]:
        members = nodes if isinstance(nodes, (set, frozenset)) else set(nodes)
        return [eid for eid, (a, b) in enumerate(zip(self.edges_u.tolist(), self.edges_v.tolist()))
                if a in members and b in members]

    def to_scipy(self, nodes: Optional[Iterable[int]] = None):
        """Symmetric CSR matrix of the (induced) graph, for independent checks."""
        from scipy.sparse import csr_matrix

        if nodes is None:
            rows, cols, data = self.edges_u, self.edges_v, self.lengths
        else:
            keep = np.zeros(self.n, dtype=bool)
            keep[list(nodes)] = True
            mask = keep[self.edges_u] & keep[self.edges_v]
            rows, cols, data = self.edges_u[mask], self.edges_v[mask], self.lengths[mask]
        return csr_matrix((np.concatenate([data, data]),
                           (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
                          shape=(self.n, self.n))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.edges_u, other.edges_u)
                and np.array_equal(self.edges_v, other.edges_v)
                and np.array_equal(self.lengths, other.lengths))

    __hash__ = None


def as_subset(nodes: Optional[Iterable[int]], n: int) -> frozenset[int]:
    """Normalise a node collection to a frozenset; ``None`` means every node."""
    if nodes is None:
        return frozenset(range(n))
    if isinstance(nodes, frozenset):
        return nodes
    return frozenset(int(v) for v in nodes)


@dataclass
class SsspResult:
    """Distances and predecessor forest of a set-source shortest path run.

    Arrays cover ``n_real`` graph nodes followed by any virtual nodes of the
    call.  ``pred[v] == -1`` marks sources and unreached nodes.
    """

    dist: np.ndarray
    pred: np.ndarray
    sources: frozenset
    n_real: int
    order: list = field(default_factory=list, repr=False)

    def reached(self, v: int) -> bool:
        return self.dist[v] < INF

    def real_dist(self) -> np.ndarray:
        return self.dist[: self.n_real]

    def path_to_source(self, v: int) -> list[int]:
        out = [v]
        seen = 1
        limit = len(self.pred)
        while self.pred[out[-1]] >= 0:
            out.append(int(self.pred[out[-1]]))
            seen += 1
            if seen > limit:
                raise RuntimeError("predecessor chain does not terminate")
        return out


Neighbors = Callable[[int], Iterable[tuple[int, float]]]


def dijkstra(total: int, sources: Iterable[int], neighbors: Neighbors,
             initial: Optional[dict[int, float]] = None) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Heap Dijkstra; ties in extraction go to the smaller node id.

    Returns ``(dist, pred, settle_order)``.
    """
    dist = np.full(total, INF)
    pred = np.full(total, -1, dtype=np.int64)
    heap = []
    for s in sources:
        d0 = 0.0 if initial is None else initial.get(s, 0.0)
        if d0 < dist[s]:
            dist[s] = d0
            heap.append((d0, s))
    heapq.heapify(heap)
    done = np.zeros(total, dtype=bool)
    order = []
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        order.append(u)
        for v, w in neighbors(u):
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred, order


def restricted_neighbors(g: WeightedGraph, active: Optional[frozenset] = None,
                         labels: Optional[Sequence[int]] = None) -> Neighbors:
    """Neighbor function of the subgraph induced by ``active``.

    With ``labels``, edges whose endpoints carry different labels are dropped.
    """
    adj = g.adj
    if active is None and labels is None:
        return lambda u: ((v, w) for v, w, _ in adj[u])
    if labels is None:
        return lambda u: ((v, w) for v, w, _ in adj[u] if v in active)

    def nb(u):
        lu = labels[u]
        return ((v, w) for v, w, _ in adj[u]
                if (active is None or v in active) and labels[v] == lu)

    return nb


def exact_sssp(g: WeightedGraph, sources: Iterable[int],
               active: Optional[Iterable[int]] = None) -> SsspResult:
    """Exact distances ``d(v, sources)`` within the subgraph induced by ``active``."""
    src = as_subset(sources, g.n)
    if not src:
        raise ValueError("source set must be nonempty")
    act = None if active is None else as_subset(active, g.n)
    for s in src:
        if not 0 <= s < g.n:
            raise ValueError(f"source {s} is not a node of the graph")
        if act is not None and s not in act:
            raise ValueError(f"source {s} is outside the active set")
    dist, pred, order = dijkstra(g.n, sorted(src), restricted_neighbors(g, act))
    return SsspResult(dist, pred, src, g.n, order)


def ball(g: WeightedGraph, center_set: Iterable[int], radius: float,
         active: Optional[Iterable[int]] = None) -> frozenset[int]:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    res = exact_sssp(g, center_set, active)
    return frozenset(np.flatnonzero(res.dist <= radius).tolist())


def connected_components(g: WeightedGraph, active: Optional[Iterable[int]] = None) -> list[frozenset[int]]:
    """Components of the induced subgraph, ordered by smallest member."""
    act = as_subset(active, g.n)
    seen: set[int] = set()
    comps = []
    for s in sorted(act):
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v, _, _ in g.adj[u]:
                if v in act and v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(frozenset(comp))
    return comps


def weighted_diameter(g: WeightedGraph, nodes: Optional[Iterable[int]] = None) -> float:
    """Largest finite pairwise distance inside the induced subgraph."""
    from scipy.sparse.csgraph import shortest_path

    members = sorted(as_subset(nodes, g.n))
    if len(members) <= 1:
        return 0.0
    sub = g.to_scipy(members)[members][:, members]
    d = shortest_path(sub, directed=False)
    finite = d[np.isfinite(d)]
    return float(finite.max()) if finite.size else 0.0
