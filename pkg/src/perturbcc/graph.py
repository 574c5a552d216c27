"""Graph representation, matrix portrait, degree data and generators.

Vertices are labeled ``1..n`` on every public surface.  Arrays handed to the
numeric kernels are 0-based; the conversion happens here and nowhere else.
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

# kernels index with int64 but labels must survive a round trip through int32 tools
MAX_VERTICES = 2**31 - 1


class GraphError(ValueError):
    """Invalid graph data (bad vertex id, inconsistent header, ...)."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


def _normalize_pairs(pairs: np.ndarray) -> np.ndarray:
    """Orient every pair as (min, max), sort lexicographically, drop duplicates."""
    if pairs.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    return np.unique(np.stack([lo, hi], axis=1), axis=0)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on vertices ``1..n``.

    ``edges`` is an ``(m, 2)`` int64 array of 1-based pairs with ``i < j``,
    sorted and free of duplicates.  Use :meth:`from_edges` to build one from
    raw pairs; the plain constructor validates but does not normalize.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise GraphError(f"vertex count must be a non-negative integer, got {self.n!r}")
        if self.n > MAX_VERTICES:
            raise OverflowError(f"n={self.n} exceeds {MAX_VERTICES}")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 1 or e.max() > self.n:
                raise GraphError(f"edge endpoint outside 1..{self.n}")
            if np.any(e[:, 0] == e[:, 1]):
                raise GraphError("self-loops are not allowed")
            norm = _normalize_pairs(e)
            if len(norm) != len(e) or not np.array_equal(norm, e):
                raise GraphError("edges must be (i<j) pairs, sorted, without duplicates; use Graph.from_edges")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from raw 1-based pairs, collapsing duplicates.

        Self-loops are rejected here; :func:`load_edge_list` is the lenient path.
        """
        arr = np.array([tuple(p) for p in pairs], dtype=np.int64).reshape(-1, 2)
        if arr.size and np.any(arr[:, 0] == arr[:, 1]):
            raise GraphError("self-loops are not allowed")
        if arr.size and (arr.min() < 1 or arr.max() > n):
            raise GraphError(f"edge endpoint outside 1..{n}")
        return cls(n, _normalize_pairs(arr))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}

    def neighbors(self) -> list[list[int]]:
        """1-based adjacency lists, index 0 unused."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.edges.tolist():
            adj[i].append(j)
            adj[j].append(i)
        for lst in adj:
            lst.sort()
        return adj

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v-1]``."""
        p = np.asarray(perm, dtype=np.int64)
        if sorted(p.tolist()) != list(range(1, self.n + 1)):
            raise GraphError("perm must be a permutation of 1..n")
        if self.m == 0:
            return Graph(self.n, self.edges)
        return Graph(self.n, _normalize_pairs(p[self.edges - 1]))

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", np.ndarray]:
        """Subgraph on ``vertices`` relabeled ``1..k`` in ascending order.

        Returns the subgraph and the array of original labels.
        """
        keep = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        index = np.zeros(self.n + 1, dtype=np.int64)
        index[keep] = np.arange(1, len(keep) + 1)
        if self.m:
            sel = (index[self.edges[:, 0]] > 0) & (index[self.edges[:, 1]] > 0)
            sub = index[self.edges[sel]]
        else:
            sub = np.empty((0, 2), dtype=np.int64)
        return Graph(len(keep), _normalize_pairs(sub)), keep

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class Portrait:
    """Flat, unordered edge array of the graph matrix.

    ``v1``/``v2`` are 0-based vertex indices, one record per undirected edge.
    One solver sweep is one pass over these records.
    """

    n: int
    v1: np.ndarray
    v2: np.ndarray

    @property
    def m(self) -> int:
        return len(self.v1)

    def records(self) -> Iterator[tuple[int, int]]:
        """Yield 1-based ``(v1, v2)`` records in storage order."""
        for a, b in zip(self.v1.tolist(), self.v2.tolist()):
            yield a + 1, b + 1

    def edge_set(self) -> set[tuple[int, int]]:
        return {(min(a, b), max(a, b)) for a, b in self.records()}

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric adjacency in CSR form ``(indptr, indices)``, neighbors ascending.

        Gauss-Seidel ordered sweeps need rows in vertex order, which the flat
        portrait does not give.
        """
        src = np.concatenate([self.v1, self.v2])
        dst = np.concatenate([self.v2, self.v1])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        indices = np.ascontiguousarray(dst, dtype=np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return indptr, indices


def build_portrait(g: Graph) -> Portrait:
    v1 = np.ascontiguousarray(g.edges[:, 0] - 1, dtype=np.int64)
    v2 = np.ascontiguousarray(g.edges[:, 1] - 1, dtype=np.int64)
    v1.setflags(write=False)
    v2.setflags(write=False)
    return Portrait(g.n, v1, v2)


def degrees(g: Graph) -> tuple[np.ndarray, int]:
    """Per-vertex degree (index 0 is vertex 1) and the maximum degree."""
    deg = np.bincount(g.edges.ravel() - 1, minlength=g.n) if g.m else np.zeros(g.n, dtype=np.int64)
    return deg.astype(np.int64), int(deg.max()) if g.n else 0


@dataclass(frozen=True)
class MatrixParams:
    """Diagonal weight and perturbation of ``A = A0 + d*I``.

    ``mu`` and ``d`` are kept exact (int or Fraction) so the exact solvers can
    use them directly; floats passed in are converted exactly.
    """

    mu: Fraction
    d: Fraction
    epsilon: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for name in ("mu", "d", "epsilon"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.d <= 0:
            raise ValueError("d must be positive")

    @classmethod
    def for_graph(cls, g: Graph, mu=None, epsilon=1, d=None) -> "MatrixParams":
        """Default parameters for ``g``.

        ``mu`` defaults to ``d_max`` (2 when ``d_max < 2``) and ``d = mu * d_max``.
        An edgeless graph gets ``d = 2``.  An explicit ``d`` overrides the
        product but must still dominate every degree.
        """
        _, dmax = degrees(g)
        if mu is None:
            mu = dmax if dmax >= 2 else 2
        mu = Fraction(mu)
        if mu <= 1:
            raise ValueError("mu must exceed 1")
        if d is None:
            d = mu * dmax if dmax > 0 else Fraction(2)
        d = Fraction(d)
        if d <= dmax:
            raise ValueError(f"d={d} must exceed the maximum degree {dmax}")
        return cls(mu, d, Fraction(epsilon))

    def check(self, g: Graph) -> None:
        _, dmax = degrees(g)
        if self.d <= dmax:
            raise ValueError(f"d={self.d} must exceed the maximum degree {dmax}")

    @property
    def d_float(self) -> float:
        return float(self.d)


@dataclass(frozen=True)
class ComponentPartition:
    """Disjoint vertex sets covering ``1..n``.

    Components are stored as sorted tuples, ordered by their smallest vertex,
    so two partitions of the same graph compare equal iff they are the same.
    """

    components: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        canon = tuple(sorted((tuple(sorted(int(v) for v in c)) for c in self.components), key=lambda c: c[0] if c else 0))
        object.__setattr__(self, "components", canon)

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "ComponentPartition":
        return cls(tuple(tuple(s) for s in sets))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "ComponentPartition":
        """Partition from a per-vertex label array (index 0 is vertex 1)."""
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(np.asarray(labels).tolist(), start=1):
            groups.setdefault(lab, []).append(v)
        return cls(tuple(tuple(vs) for vs in groups.values()))

    @property
    def K(self) -> int:
        return len(self.components)

    def sizes(self) -> list[int]:
        return sorted(len(c) for c in self.components)

    def labels(self, n: int) -> np.ndarray:
        out = np.full(n, -1, dtype=np.int64)
        for k, comp in enumerate(self.components):
            out[np.asarray(comp, dtype=np.int64) - 1] = k
        return out

    def validate(self, g: Graph) -> None:
        """Raise if this is not a partition of ``g`` into edge-closed sets."""
        seen = [v for c in self.components for v in c]
        if sorted(seen) != list(range(1, g.n + 1)):
            raise AssertionError("components are not a partition of 1..n")
        lab = self.labels(g.n)
        if g.m and np.any(lab[g.edges[:, 0] - 1] != lab[g.edges[:, 1] - 1]):
            raise AssertionError("an edge crosses two components")

    def to_lists(self) -> list[list[int]]:
        return [list(c) for c in self.components]


# --- edge-list files -----------------------------------------------------

@dataclass
class LoadReport:
    duplicates: int = 0
    loops: int = 0
    header_n: int | None = None
    warnings: list[str] = field(default_factory=list)


_INT = re.compile(r"[+-]?\d+\Z")


def load_edge_list(text: str) -> tuple[Graph, LoadReport]:
    """Parse the ``"i j"`` per line edge-list format.

    Blank lines and ``#`` comments are skipped, CRLF is accepted, and an
    optional ``n <count>`` line fixes the vertex count (otherwise the largest
    id seen).  Duplicate edges are collapsed and self-loops dropped; both are
    counted in the returned report.
    """
    report = LoadReport()
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "n":
            if len(tok) != 2 or not _INT.match(tok[1]):
                raise EdgeListParseError(lineno, raw, "header must be 'n <count>'")
            if report.header_n is not None:
                raise EdgeListParseError(lineno, raw, "duplicate header")
            report.header_n = int(tok[1])
            if report.header_n < 0:
                raise GraphError(f"line {lineno}: negative vertex count")
            continue
        if len(tok) != 2 or not all(_INT.match(t) for t in tok):
            raise EdgeListParseError(lineno, raw, "expected two integers")
        i, j = int(tok[0]), int(tok[1])
        if i <= 0 or j <= 0:
            raise GraphError(f"line {lineno}: vertex ids are 1-based, got {i} {j}")
        if i == j:
            report.loops += 1
            continue
        pairs.append((i, j))

    max_id = max((max(p) for p in pairs), default=0)
    n = report.header_n if report.header_n is not None else max_id
    if max_id > n:
        raise GraphError(f"vertex id {max_id} exceeds header n={n}")
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    norm = _normalize_pairs(arr)
    report.duplicates = len(arr) - len(norm)
    if report.duplicates:
        report.warnings.append(f"{report.duplicates} duplicate edge(s) collapsed")
    if report.loops:
        report.warnings.append(f"{report.loops} self-loop(s) dropped")
    return Graph(n, norm), report


def read_edge_list(path: str | Path) -> tuple[Graph, LoadReport]:
    return load_edge_list(Path(path).read_text())


def dump_edge_list(g: Graph, out: TextIO | None = None) -> str:
    """Write ``g`` in the edge-list format (with header); returns the text."""
    buf = io.StringIO()
    buf.write(f"n {g.n}\n")
    for i, j in g.edges.tolist():
        buf.write(f"{i} {j}\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


# --- generators ----------------------------------------------------------

def gen_chain_union(count: int, length: int, seed: int | None = None, shuffle: bool = True) -> Graph:
    """Disjoint union of ``count`` simple chains of ``length`` vertices each.

    With ``shuffle`` the vertex labels are a uniform random permutation of
    ``1..n`` drawn from ``seed``; without it chain ``k`` is the consecutive
    run ``k*length+1 .. (k+1)*length``.
    """
    if count < 1 or length < 1:
        raise ValueError("count and length must be >= 1")
    n = count * length
    if n > MAX_VERTICES:
        raise OverflowError(f"count*length = {n} exceeds {MAX_VERTICES}")
    if shuffle:
        label = np.random.default_rng(seed).permutation(n).astype(np.int64) + 1
    else:
        label = np.arange(1, n + 1, dtype=np.int64)
    pos = np.arange(n, dtype=np.int64).reshape(count, length)
    a = pos[:, :-1].ravel()
    b = pos[:, 1:].ravel()
    return Graph(n, _normalize_pairs(np.stack([label[a], label[b]], axis=1)))


def _unrank_pairs(n: int, ranks: np.ndarray) -> np.ndarray:
    """Map ranks in ``[0, n(n-1)/2)`` to 0-based pairs ``(i, j)``, ``i < j``, row-major."""
    r = ranks.astype(np.int64)
    # row i starts at rank i*n - i*(i+1)/2
    i = (n - 2 - np.floor(np.sqrt(-8.0 * r + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    start = i * n - i * (i + 1) // 2
    # guard the float sqrt at row boundaries
    over = start > r
    i[over] -= 1
    start = i * n - i * (i + 1) // 2
    nxt = (i + 1) * n - (i + 1) * (i + 2) // 2
    under = r >= nxt
    i[under] += 1
    start = i * n - i * (i + 1) // 2
    j = r - start + i + 1
    return np.stack([i, j], axis=1)


def gen_random_graph(n: int, m: int, seed: int | None = None) -> Graph:
    """Uniform simple graph with exactly ``m`` edges on ``n`` vertices."""
    total = n * (n - 1) // 2
    if n < 0 or not 0 <= m <= total:
        raise ValueError(f"m must lie in [0, {total}] for n={n}, got {m}")
    if m == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    rng = np.random.default_rng(seed)
    ranks = np.sort(rng.choice(total, size=m, replace=False))
    return Graph(n, _normalize_pairs(_unrank_pairs(n, ranks) + 1))


def random_relabeling(n: int, seed: int | None = None) -> np.ndarray:
    return np.random.default_rng(seed).permutation(n).astype(np.int64) + 1


def example_graph() -> Graph:
    """8-vertex graph with a 4-level BFS from vertex 1 but only 2 Gauss-Seidel sweeps."""
    return Graph.from_edges(8, [(1, 2), (2, 3), (2, 6), (3, 4), (3, 7), (5, 6), (6, 7), (7, 8)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(1, n)])


def path_graph_reordered() -> Graph:
    """Five-vertex chain 1-5-4-3-2, labeled so no ascending chain leaves the start."""
    return Graph.from_edges(5, [(1, 5), (2, 3), (3, 4), (4, 5)])


def max_edges(n: int) -> int:
    return math.comb(n, 2) if n >= 2 else 0
