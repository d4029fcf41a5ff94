"""Edge-list and DIMACS ``.gr`` readers/writers."""

from __future__ import annotations

import os
from typing import Iterable, TextIO, Union

from .graph import GraphError, WeightedGraph

PathLike = Union[str, os.PathLike]


def _merge(edges: Iterable[tuple[int, int, float]]) -> list[tuple[int, int, float]]:
    # parallel/antiparallel copies collapse to the lightest one
    best: dict[tuple[int, int], float] = {}
    for u, v, w in edges:
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        key = (min(u, v), max(u, v))
        if key not in best or w < best[key]:
            best[key] = w
    return [(a, b, w) for (a, b), w in sorted(best.items())]


def parse_edge_list(lines: Iterable[str], n: int | None = None) -> WeightedGraph:
    """Parse ``u v w`` lines (0-based ids).  ``#`` starts a comment.

    A ``# nodes: N`` comment fixes the node count so isolated trailing
    nodes survive a round trip.
    """
    edges = []
    declared = n
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("nodes:") and declared is None:
                declared = int(body.split(":", 1)[1])
            continue
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphError(f"line {lineno}: expected 'u v w', got {line!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
        edges.append((u, v, w))
    if declared is None:
        declared = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return WeightedGraph(declared, _merge(edges))


def parse_dimacs(lines: Iterable[str]) -> WeightedGraph:
    """Parse a DIMACS shortest-path file; arcs are symmetrised, ids made 0-based."""
    n = None
    edges = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "sp":
                raise GraphError(f"line {lineno}: bad problem line {line!r}")
            n = int(parts[2])
        elif parts[0] == "a":
            if n is None:
                raise GraphError(f"line {lineno}: arc before problem line")
            if len(parts) != 4:
                raise GraphError(f"line {lineno}: bad arc line {line!r}")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1, float(parts[3])))
        else:
            raise GraphError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphError("missing 'p sp n m' header")
    return WeightedGraph(n, _merge(edges))


def read_graph(path: PathLike) -> WeightedGraph:
    with open(path) as fh:
        if str(path).endswith(".gr"):
            return parse_dimacs(fh)
        return parse_edge_list(fh)


def format_weight(w: float) -> str:
    return repr(float(w))


def write_edge_list(g: WeightedGraph, out: Union[PathLike, TextIO]) -> None:
    def emit(fh):
        fh.write(f"# nodes: {g.n}\n")
        for u, v, w in g.edges():
            fh.write(f"{u} {v} {format_weight(w)}\n")

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w") as fh:
            emit(fh)


def write_dimacs(g: WeightedGraph, out: Union[PathLike, TextIO]) -> None:
    def emit(fh):
        fh.write(f"p sp {g.n} {2 * g.m}\n")
        for u, v, w in g.edges():
            fh.write(f"a {u + 1} {v + 1} {format_weight(w)}\n")
            fh.write(f"a {v + 1} {u + 1} {format_weight(w)}\n")

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w") as fh:
            emit(fh)
