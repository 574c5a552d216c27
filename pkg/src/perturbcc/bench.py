"""Benchmark harness over generated graph suites, emitting CSV."""

from __future__ import annotations

import csv
import io
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, TextIO

from .graph import Graph, gen_chain_union
from .traversal import SWEEP_STRATEGIES, canonical_strategy, components_via

CSV_COLUMNS = ("n", "m", "K", "strategy", "total_iterations", "wall_ns")
SUITES = ("chains",)


@dataclass
class BenchRecord:
    n: int
    m: int
    K: int
    seed: int | None
    strategy: str
    backend: str
    iterations: list[int]
    portrait_passes: int
    wall_ns: int
    peak_bytes: int

    @property
    def total_iterations(self) -> int:
        return sum(self.iterations)

    def row(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "K": self.K,
            "strategy": self.strategy,
            "total_iterations": self.total_iterations,
            "wall_ns": self.wall_ns,
        }


@dataclass
class SuiteSpec:
    """``sizes`` are ``(chains, length)`` pairs for the chains suite."""

    suite: str = "chains"
    sizes: Sequence[tuple[int, int]] = ()
    strategies: Sequence[str] = SWEEP_STRATEGIES
    seed: int = 0
    repeats: int = 3
    backend: str | None = None
    workers: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; expected one of {SUITES}")
        if self.repeats < 3:
            raise ValueError("at least 3 timed repeats are required")
        self.strategies = [canonical_strategy(s) for s in self.strategies]


def parse_sizes(text: str) -> list[tuple[int, int]]:
    """``"90x100,10x5"`` -> ``[(90, 100), (10, 5)]``."""
    out = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        try:
            c, l = tok.lower().split("x")
            out.append((int(c), int(l)))
        except ValueError:
            raise ValueError(f"size {tok!r} must look like CHAINSxLENGTH") from None
    return out


def _estimate_bytes(g: Graph) -> int:
    # portrait (2m), csr (n+1 + 2m), level + mask + assigned + two sweep buffers
    return 8 * (2 * g.m + (g.n + 1) + 2 * g.m + g.n) + 4 * g.n


def _measure(g: Graph, seed: int | None, strategy: str, repeats: int, backend: str | None) -> BenchRecord:
    from ._kernels import default_backend

    components_via(g, strategy, backend=backend, keep_traces=False)  # warm-up, discarded
    times = []
    res = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        res = components_via(g, strategy, backend=backend, keep_traces=False)
        times.append(time.perf_counter_ns() - t0)
    return BenchRecord(
        n=g.n,
        m=g.m,
        K=res.K,
        seed=seed,
        strategy=strategy,
        backend=backend or default_backend(),
        iterations=list(res.iterations),
        portrait_passes=res.total_sweeps,
        wall_ns=int(statistics.median(times)),
        peak_bytes=_estimate_bytes(g),
    )


def pool_size(requested: int | None = None) -> int:
    if requested:
        return max(1, requested)
    env = os.environ.get("PERTURBCC_THREADS", "").strip()
    return max(1, int(env)) if env else 1


def run_bench(spec: SuiteSpec) -> list[BenchRecord]:
    """One record per (size, strategy), in suite order."""
    jobs = []
    for idx, (count, length) in enumerate(spec.sizes):
        seed = spec.seed + idx
        g = gen_chain_union(count, length, seed)
        for s in spec.strategies:
            jobs.append((g, seed, s))
    workers = pool_size(spec.workers)
    if workers == 1 or len(jobs) <= 1:
        return [_measure(g, seed, s, spec.repeats, spec.backend) for g, seed, s in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_measure, g, seed, s, spec.repeats, spec.backend) for g, seed, s in jobs]
        return [f.result() for f in futures]


def write_csv(records: Sequence[BenchRecord], out: TextIO | None = None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row())
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
