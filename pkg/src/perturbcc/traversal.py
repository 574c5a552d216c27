"""Component search driven by stationary-solver sweeps.

A vertex is *reached* at sweep ``k`` when its solution entry turns nonzero.
Three sweep orders are provided:

* ``algebraic-bfs``: pattern of ``x <- A x`` (loops keep reached entries alive);
* ``sis``: Jacobi order, entry ``j`` only sees the previous vector;
* ``gss``: Gauss-Seidel order, ascending ``j``, lower neighbours already updated.

The default ``pattern`` mode propagates the boolean nonzero pattern, so no
cancellation can fake a zero.  ``mode="float"`` runs the literal
multiply-by-diagonal recurrences in float64 and reads reachability off
``x != 0``; it is meant for small fidelity experiments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .exact import EXACT_CAP, ExactCapError, perturb_component
from .graph import ComponentPartition, Graph, MatrixParams, Portrait, build_portrait

STRATEGIES = ("algebraic-bfs", "sis", "gss", "exact-perturb")
ALIASES = {"bfs": "algebraic-bfs", "exact": "exact-perturb"}
SWEEP_STRATEGIES = ("algebraic-bfs", "sis", "gss")
_KERNEL = {"algebraic-bfs": "bfs", "sis": "sis", "gss": "gss"}


def canonical_strategy(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGIES + tuple(ALIASES)}")
    return name


@dataclass
class ReachState:
    """Nonzero pattern of the current iterate."""

    start: int
    reached: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, n: int, start: int) -> "ReachState":
        reached = np.zeros(n, dtype=np.bool_)
        reached[start - 1] = True
        return cls(start, reached, 0)

    def vertices(self) -> frozenset[int]:
        return frozenset((np.flatnonzero(self.reached) + 1).tolist())


@dataclass
class TraversalTrace:
    """Vertices first reached at each productive sweep (1-based labels)."""

    start: int
    newly_reached: list[frozenset[int]]
    iterations_used: int
    sweeps: int

    def component(self) -> frozenset[int]:
        return frozenset({self.start}).union(*self.newly_reached)

    def reached_after(self, k: int) -> frozenset[int]:
        return frozenset({self.start}).union(*self.newly_reached[:k])

    def records(self) -> list[dict]:
        return [{"k": k, "new": sorted(s)} for k, s in enumerate(self.newly_reached, start=1)]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records())


@dataclass
class Mask:
    """Vertices excluded from further sweeps (already assigned to a component)."""

    masked: np.ndarray

    @classmethod
    def none(cls, n: int) -> "Mask":
        return cls(np.zeros(n, dtype=np.bool_))

    def add(self, vertices) -> None:
        self.masked[np.asarray(sorted(vertices), dtype=np.int64) - 1] = True

    def active(self) -> np.ndarray:
        """0-based indices of unmasked vertices, ascending."""
        return np.flatnonzero(~self.masked).astype(np.int64)


def _trace_from_levels(start: int, vertices: np.ndarray, levels: np.ndarray, iterations: int, sweeps: int) -> TraversalTrace:
    buckets: list[set[int]] = [set() for _ in range(iterations)]
    for v, lev in zip(vertices.tolist(), levels.tolist()):
        if lev > 0:
            buckets[lev - 1].add(v + 1)
    return TraversalTrace(start, [frozenset(b) for b in buckets], iterations, sweeps)


def _run_pattern(strategy, g, start, portrait, mask, backend):
    if not 1 <= start <= g.n:
        raise ValueError(f"start vertex {start} outside 1..{g.n}")
    portrait = portrait or build_portrait(g)
    indptr, indices = portrait.csr
    active = mask.active() if mask is not None else np.arange(g.n, dtype=np.int64)
    if mask is not None and mask.masked[start - 1]:
        raise ValueError(f"start vertex {start} is masked")
    level = np.full(g.n, -1, dtype=np.int64)
    run = _kernels.get(_KERNEL[strategy], backend)
    iterations, sweeps = run(indptr, indices, active, start - 1, g.n + 1, level)
    if iterations == sweeps:
        raise RuntimeError("traversal hit the sweep cap without reaching a fixpoint")
    reached = active[level[active] >= 0]
    trace = _trace_from_levels(start, reached, level[reached], int(iterations), int(sweeps))
    return frozenset((reached + 1).tolist()), trace


# --- float-mode recurrences ----------------------------------------------

def _float_step(strategy, x, start0, nbrs, active, d):
    with np.errstate(over="ignore", invalid="ignore"):
        if strategy == "algebraic-bfs":
            out = x.copy()
            for j in active:
                out[j] = d * x[j] + sum(x[l] for l in nbrs[j])
            return out
        if strategy == "sis":
            out = x.copy()
            for j in active:
                out[j] = d * ((1.0 if j == start0 else 0.0) - sum(x[l] for l in nbrs[j]))
            return out
        out = x
        for j in active:
            out[j] = d * ((1.0 if j == start0 else 0.0) - sum(out[l] for l in nbrs[j]))
        return out


def _run_float(strategy, g, start, portrait, mask, params):
    portrait = portrait or build_portrait(g)
    params = params or MatrixParams.for_graph(g)
    indptr, indices = portrait.csr
    nbrs = [indices[indptr[j]:indptr[j + 1]].tolist() for j in range(g.n)]
    active = (mask.active() if mask is not None else np.arange(g.n)).tolist()
    d = float(params.d)
    x = np.zeros(g.n)
    x[start - 1] = 1.0
    ever = x != 0
    newly: list[frozenset[int]] = []
    sweeps = 0
    while sweeps <= g.n:
        x = _float_step(strategy, x, start - 1, nbrs, active, d)
        sweeps += 1
        nz = x != 0
        fresh = nz & ~ever
        if not fresh.any():
            break
        ever |= fresh
        newly.append(frozenset((np.flatnonzero(fresh) + 1).tolist()))
    trace = TraversalTrace(start, newly, len(newly), sweeps)
    return trace.component(), trace


def _single(strategy, g, start, *, portrait=None, mask=None, backend=None, mode="pattern", params=None):
    if mode == "pattern":
        return _run_pattern(strategy, g, start, portrait, mask, backend)
    if mode == "float":
        return _run_float(strategy, g, start, portrait, mask, params)
    raise ValueError(f"unknown mode {mode!r}")


def algebraic_bfs_component(g: Graph, start: int, **kw) -> tuple[frozenset[int], TraversalTrace]:
    """Component of ``start`` by iterating the pattern of ``x <- A x`` from ``e_start``."""
    return _single("algebraic-bfs", g, start, **kw)


def sis_component(g: Graph, start: int, **kw) -> tuple[frozenset[int], TraversalTrace]:
    """Component of ``start`` by Jacobi-ordered sweeps; level-for-level equal to BFS."""
    return _single("sis", g, start, **kw)


def gss_component(g: Graph, start: int, **kw) -> tuple[frozenset[int], TraversalTrace]:
    """Component of ``start`` by Gauss-Seidel-ordered sweeps (ascending vertex order)."""
    return _single("gss", g, start, **kw)


def simple_iteration_portrait(x: Sequence[float], p: Portrait, params: MatrixParams, start: int, *, backend: str | None = None) -> np.ndarray:
    """One simple-iteration sweep ``(b - A0 x) / d`` in a single pass over the portrait.

    ``b`` is ``e_start`` (1-based ``start``).
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (p.n,):
        raise ValueError(f"x must have length {p.n}")
    kern = _kernels.get("simple_iteration", backend)
    return kern(x, p.v1, p.v2, start - 1, float(params.d))


# --- full partition ------------------------------------------------------

@dataclass
class ComponentsResult:
    partition: ComponentPartition
    starts: list[int]
    iterations: list[int]
    sweeps: list[int]
    traces: list[TraversalTrace | None] = field(default_factory=list)
    strategy: str = ""

    @property
    def K(self) -> int:
        return self.partition.K

    @property
    def total_iterations(self) -> int:
        return sum(self.iterations)

    @property
    def total_sweeps(self) -> int:
        return sum(self.sweeps)

    def to_json(self, with_traces: bool = False) -> dict:
        out = {
            "strategy": self.strategy,
            "components": self.partition.to_lists(),
            "K": self.K,
            "iterations": self.total_iterations,
            "iterations_per_component": self.iterations,
            "starts": self.starts,
        }
        if with_traces:
            out["traces"] = [
                None if t is None else {"start": t.start, "trace": t.records()} for t in self.traces
            ]
        return out


def components_via(
    g: Graph,
    strategy: str = "gss",
    *,
    backend: str | None = None,
    masking: bool = True,
    keep_traces: bool = True,
    first_start: int | None = None,
    params: MatrixParams | None = None,
    mode: str = "pattern",
    exact_cap: int = EXACT_CAP,
) -> ComponentsResult:
    """Partition ``g`` by repeatedly growing the component of the lowest
    unassigned vertex (``first_start`` goes first when given).

    With ``masking`` the vertices of found components drop out of later
    sweeps; the exact strategy then solves on the remaining induced subgraph.
    """
    strategy = canonical_strategy(strategy)
    if strategy == "exact-perturb" and g.n > exact_cap:
        raise ExactCapError(f"exact mode is limited to n <= {exact_cap} vertices (got n={g.n}); use bfs, sis or gss")
    if first_start is not None and not 1 <= first_start <= g.n:
        raise ValueError(f"start vertex {first_start} outside 1..{g.n}")

    portrait = build_portrait(g)
    mask = Mask.none(g.n)
    assigned = np.zeros(g.n, dtype=np.bool_)
    comps, starts, iters, sweeps, traces = [], [], [], [], []
    cursor = 0
    start = first_start
    while True:
        if start is None:
            while cursor < g.n and assigned[cursor]:
                cursor += 1
            if cursor == g.n:
                break
            start = cursor + 1
        if strategy == "exact-perturb":
            comp = _exact_component(g, start, mask if masking else None, params)
            trace, it, sw = None, 0, 0
        else:
            comp, trace = _single(
                strategy, g, start, portrait=portrait, mask=mask if masking else None,
                backend=backend, mode=mode, params=params,
            )
            it, sw = trace.iterations_used, trace.sweeps
        idx = np.asarray(sorted(comp), dtype=np.int64) - 1
        if assigned[idx].any():
            raise RuntimeError(f"component of {start} overlaps an earlier component")
        assigned[idx] = True
        if masking:
            mask.masked[idx] = True
        comps.append(tuple(sorted(comp)))
        starts.append(start)
        iters.append(it)
        sweeps.append(sw)
        traces.append(trace if keep_traces else None)
        start = None
    return ComponentsResult(ComponentPartition(tuple(comps)), starts, iters, sweeps, traces, strategy)


def _exact_component(g: Graph, start: int, mask: Mask | None, params: MatrixParams | None) -> frozenset[int]:
    p = params or MatrixParams.for_graph(g)
    if mask is None:
        return perturb_component(g, p, start)
    keep = mask.active() + 1
    sub, labels = g.induced(keep.tolist())
    local = int(np.searchsorted(labels, start)) + 1
    return frozenset(int(labels[v - 1]) for v in perturb_component(sub, p, local))
