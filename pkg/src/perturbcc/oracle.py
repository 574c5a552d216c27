"""Classical ground truth: union-find components, BFS levels, distances.

Nothing here shares code with the solver-based traversals, so agreement
between the two is a real check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import ComponentPartition, Graph


class UnionFind:
    """Disjoint sets over ``0..size-1`` with path halving and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.count = size

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


def uf_components(g: Graph) -> ComponentPartition:
    uf = UnionFind(g.n)
    for i, j in g.edges.tolist():
        uf.union(i - 1, j - 1)
    return ComponentPartition.from_labels([uf.find(v) for v in range(g.n)])


@dataclass(frozen=True)
class BfsLevels:
    start: int
    levels: tuple[frozenset[int], ...]

    @property
    def component(self) -> frozenset[int]:
        return frozenset().union(*self.levels)


def _check_vertex(g: Graph, v: int) -> None:
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} outside 1..{g.n}")


def _distances(adj: list[list[int]], start: int) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def bfs_levels(g: Graph, start: int, adj: list[list[int]] | None = None) -> BfsLevels:
    _check_vertex(g, start)
    dist = _distances(adj if adj is not None else g.neighbors(), start)
    levels: list[set[int]] = [set() for _ in range(max(dist.values()) + 1)]
    for v, t in dist.items():
        levels[t].add(v)
    return BfsLevels(start, tuple(frozenset(s) for s in levels))


def eccentricity(g: Graph, start: int, adj: list[list[int]] | None = None) -> int:
    """Largest finite distance from ``start``."""
    _check_vertex(g, start)
    return max(_distances(adj if adj is not None else g.neighbors(), start).values())


def diameter(g: Graph) -> int:
    """Largest finite shortest-path length over all pairs; 0 for edgeless graphs."""
    adj = g.neighbors()
    return max((eccentricity(g, v, adj) for v in range(1, g.n + 1)), default=0)


def bfs_partition(g: Graph) -> ComponentPartition:
    """Components by repeated BFS from the lowest unvisited vertex."""
    adj = g.neighbors()
    seen = [False] * (g.n + 1)
    comps = []
    for v in range(1, g.n + 1):
        if not seen[v]:
            comp = _distances(adj, v).keys()
            for w in comp:
                seen[w] = True
            comps.append(tuple(comp))
    return ComponentPartition(tuple(comps))
