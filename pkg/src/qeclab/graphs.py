"""Finite simple graphs on vertices 1..n and their BFS distance matrices."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .numerics import SymMatrix

__all__ = [
    "Graph",
    "GraphError",
    "EdgeListError",
    "parse_edge_list",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "star_graph",
    "random_connected_graph",
    "from_spec",
    "bfs_distances",
    "distance_matrix",
]


class GraphError(ValueError):
    pass


class EdgeListError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; vertices are 1..n, edges stored as (u, v) with u < v."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge ({u}, {v}) out of range 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacency(self) -> list[list[int]]:
        """0-indexed neighbour lists, sorted for deterministic traversal."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            adj[u - 1].append(v - 1)
            adj[v - 1].append(u - 1)
        return adj

    def is_connected(self) -> bool:
        return bool((bfs_distances(self.adjacency(), 0) >= 0).all())


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``#`` comments and blank lines are skipped."""
    edges = set()
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected two vertex labels, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, f"vertex labels must be integers, got {line!r}") from None
        if u < 1 or v < 1:
            raise EdgeListError(lineno, "vertex labels must be >= 1")
        if u == v:
            raise EdgeListError(lineno, f"self-loop at vertex {u}")
        edges.add((min(u, v), max(u, v)))
        n = max(n, u, v)
    if n == 0:
        raise GraphError("edge list is empty")
    return Graph(n, frozenset(edges))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, frozenset([(i, i + 1) for i in range(1, n)] + [(1, n)]))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def star_graph(n: int) -> Graph:
    """Centre 1 joined to 2..n."""
    return Graph(n, frozenset((1, j) for j in range(2, n + 1)))


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """A random spanning tree plus independent extra edges with probability p."""
    edges = set()
    order = rng.permutation(n) + 1
    for k in range(1, n):
        u = int(order[k])
        v = int(order[rng.integers(0, k)])
        edges.add((min(u, v), max(u, v)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < p:
                edges.add((i, j))
    return Graph(n, frozenset(edges))


_GENERATORS = {
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "star": star_graph,
}


def from_spec(spec: str) -> Graph:
    """Build a graph from a ``kind:n`` generator spec, e.g. ``path:5``."""
    kind, sep, count = spec.partition(":")
    if not sep or kind not in _GENERATORS:
        raise GraphError(f"unknown generator spec {spec!r}; expected one of "
                         + ", ".join(f"{k}:n" for k in _GENERATORS))
    try:
        n = int(count)
    except ValueError:
        raise GraphError(f"generator size must be an integer, got {count!r}") from None
    return _GENERATORS[kind](n)


def bfs_distances(adj: list[list[int]], source: int) -> np.ndarray:
    """Hop distances from ``source``; -1 marks unreachable vertices."""
    dist = np.full(len(adj), -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance_matrix(g: Graph) -> SymMatrix:
    """All-pairs shortest-path lengths (one BFS per vertex)."""
    adj = g.adjacency()
    first = bfs_distances(adj, 0)
    if (first < 0).any():
        missing = int(np.flatnonzero(first < 0)[0]) + 1
        raise GraphError(f"graph is disconnected: no walk between vertices 1 and {missing}")
    d = np.vstack([first] + [bfs_distances(adj, v) for v in range(1, g.n)])
    return SymMatrix(d.astype(float), exact=False)
