import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from strongldd.generators import generate
from strongldd.graph import WeightedGraph

DATA = Path(__file__).parent / "data"

# acceptance lines collected during the session, printed in the summary
CRITERIA_LOG: list = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERIA_LOG, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


def floyd_warshall(g: WeightedGraph, nodes=None) -> np.ndarray:
    """All-pairs distances by the textbook triple loop (vectorised over one index)."""
    d = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(d, 0.0)
    keep = set(range(g.n)) if nodes is None else set(nodes)
    for u, v, w in g.edges():
        if u in keep and v in keep:
            d[u, v] = d[v, u] = min(d[u, v], w)
    for k in range(g.n):
        if k not in keep:
            continue
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def components_by_union_find(g: WeightedGraph, active):
    uf = UnionFind(g.n)
    for u, v, _ in g.edges():
        if u in active and v in active:
            uf.union(u, v)
    groups = {}
    for v in active:
        groups.setdefault(uf.find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()), key=min)


def frozen(name):
    return json.loads((DATA / name).read_text())


@st.composite
def graphs(draw, min_nodes=1, max_nodes=14, connected=False, max_weight=10):
    n = draw(st.integers(min_nodes, max_nodes))
    edges = {}
    if connected:
        for v in range(1, n):
            u = draw(st.integers(0, v - 1))
            edges[(u, v)] = draw(st.integers(1, max_weight))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n))
        for p in extra:
            edges.setdefault(p, draw(st.integers(1, max_weight)))
    return WeightedGraph(n, [(a, b, float(w)) for (a, b), w in sorted(edges.items())],
                         weight_cap=max(max_weight, n ** 3))


def corpus():
    """The acceptance corpus with declared path separability."""
    return {
        "path64": (generate("path", 64), 1),
        "grid64": (generate("grid", 64), 3),
        "tree60": (generate("tree", 60, seed=0), 1),
        "ktree48": (generate("ktree", 48, seed=0, width=2), 2),
    }


@pytest.fixture(scope="session")
def graphs_corpus():
    return corpus()
