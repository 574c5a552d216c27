"""Seeded graph corpora shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np

from perturbcc.graph import Graph


def clustered_graph(n: int, k: int, density: float, rng: np.random.Generator) -> Graph:
    """``k`` connected blocks (random spanning tree plus extra edges with
    probability ``density``) under a random labeling."""
    k = max(1, min(k, n))
    cuts = np.sort(rng.choice(np.arange(1, n), size=k - 1, replace=False)) if k > 1 else np.array([], dtype=int)
    blocks = np.split(np.arange(n), cuts)
    pairs = []
    for b in blocks:
        for t in range(1, len(b)):
            pairs.append((b[t], b[rng.integers(0, t)]))
        if density > 0 and len(b) > 2:
            iu, ju = np.triu_indices(len(b), 1)
            keep = rng.random(len(iu)) < density
            pairs.extend(zip(b[iu[keep]], b[ju[keep]]))
    label = rng.permutation(n) + 1
    return Graph.from_edges(n, [(label[a], label[b]) for a, b in pairs])


def oracle_corpus(count: int, n_max: int, seed: int, k_max: int = 10):
    """Graphs spanning edgeless to complete with 1..k_max components."""
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(count):
        kind = idx % 10
        if kind == 0:
            n = int(rng.integers(1, min(k_max, n_max) + 1))
            out.append(Graph(n, np.empty((0, 2), dtype=np.int64)))
            continue
        n = int(rng.integers(1, n_max + 1))
        if kind == 1:
            out.append(Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2)))
            continue
        k = int(rng.integers(1, k_max + 1))
        density = float(rng.choice([0.0, 0.01, 0.05, 0.2, 0.5, 0.9, 1.0]))
        out.append(clustered_graph(n, k, density, rng))
    return out


def random_small_graphs(count: int, n_max: int, seed: int, n_min: int = 1):
    """Uniform G(n, p) samples, any number of components."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        p = float(rng.random())
        pairs = [(i, j) for i, j in itertools.combinations(range(1, n + 1), 2) if rng.random() < p]
        out.append(Graph.from_edges(n, pairs))
    return out


def connected_graphs(count: int, n_max: int, seed: int, n_min: int = 1):
    rng = np.random.default_rng(seed)
    return [
        clustered_graph(int(rng.integers(n_min, n_max + 1)), 1, float(rng.random()), rng)
        for _ in range(count)
    ]


def all_graphs(n: int):
    """Every labeled simple graph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for b, p in enumerate(pairs) if mask >> b & 1])


def is_connected(g: Graph) -> bool:
    from perturbcc.oracle import uf_components

    return uf_components(g).K == 1
