"""Sweep kernels for the solver-driven traversals.

Every kernel exists twice: a numba ``@njit`` version and a vectorized numpy
version.  ``PERTURBCC_BACKEND`` (``numba`` or ``numpy``) picks the default;
numba is used when it imports and the variable is unset.

Run kernels share one signature::

    run(indptr, indices, active, start, cap, level) -> (iterations, sweeps)

``indptr``/``indices`` is the symmetric CSR adjacency (0-based), ``active``
the ascending unmasked vertex indices, ``level`` an int64 array pre-filled
with -1 that receives the iteration at which each vertex was first reached
(0 for ``start``).  ``iterations`` counts productive sweeps; ``sweeps``
includes the final sweep that confirmed the fixpoint.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def default_backend() -> str:
    env = os.environ.get("PERTURBCC_BACKEND", "").strip().lower()
    if env:
        if env not in BACKENDS:
            raise ValueError(f"PERTURBCC_BACKEND must be one of {BACKENDS}, got {env!r}")
        if env == "numba" and not HAVE_NUMBA:
            raise RuntimeError("PERTURBCC_BACKEND=numba but numba is not importable")
        return env
    return "numba" if HAVE_NUMBA else "numpy"


# --- numpy backend -------------------------------------------------------

def _directed_edges(indptr, indices, active):
    """Directed (src, dst) arrays of all arcs between active vertices."""
    counts = indptr[active + 1] - indptr[active]
    src = np.repeat(active, counts)
    starts = np.repeat(indptr[active] - np.cumsum(counts) + counts, counts)
    dst = indices[starts + np.arange(counts.sum())]
    if len(active) < len(indptr) - 1:
        live = np.zeros(len(indptr) - 1, dtype=np.bool_)
        live[active] = True
        keep = live[dst]
        src, dst = src[keep], dst[keep]
    return src, dst


def _gather(indptr, indices, frontier):
    counts = indptr[frontier + 1] - indptr[frontier]
    total = counts.sum()
    if total == 0:
        return indices[:0]
    offs = np.repeat(indptr[frontier] - np.cumsum(counts) + counts, counts)
    return indices[offs + np.arange(total)]


def _finish(level, reached, k):
    fresh = reached & (level < 0)
    level[fresh] = k
    return int(fresh.sum())


def bfs_run_numpy(indptr, indices, active, start, cap, level):
    n = len(level)
    src, dst = _directed_edges(indptr, indices, active)
    prev = np.zeros(n, dtype=np.bool_)
    prev[start] = True
    level[start] = 0
    iterations = sweeps = 0
    while sweeps < cap:
        hit = np.zeros(n, dtype=np.bool_)
        hit[dst[prev[src]]] = True
        new = prev | hit
        sweeps += 1
        if _finish(level, new, iterations + 1) == 0:
            break
        iterations += 1
        prev = new
    return iterations, sweeps


def sis_run_numpy(indptr, indices, active, start, cap, level):
    n = len(level)
    src, dst = _directed_edges(indptr, indices, active)
    prev = np.zeros(n, dtype=np.bool_)
    prev[start] = True
    level[start] = 0
    iterations = sweeps = 0
    while sweeps < cap:
        new = np.zeros(n, dtype=np.bool_)
        new[start] = True
        new[dst[prev[src]]] = True
        sweeps += 1
        if _finish(level, new, iterations + 1) == 0:
            break
        iterations += 1
        prev = new
    return iterations, sweeps


def gss_run_numpy(indptr, indices, active, start, cap, level):
    # A sweep in ascending order reaches j iff j is the start, an upper
    # neighbour was reached in the previous vector, or a lower neighbour is
    # reached earlier in this sweep: closure of the first two seeds along
    # ascending arcs.
    n = len(level)
    src, dst = _directed_edges(indptr, indices, active)
    down = src > dst
    down_src, down_dst = src[down], dst[down]
    up = ~down
    up_src, up_dst = src[up], dst[up]
    up_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(up_src, minlength=n), out=up_indptr[1:])
    up_indices = up_dst[np.argsort(up_src, kind="stable")]

    prev = np.zeros(n, dtype=np.bool_)
    prev[start] = True
    level[start] = 0
    iterations = sweeps = 0
    while sweeps < cap:
        cur = np.zeros(n, dtype=np.bool_)
        cur[start] = True
        cur[down_dst[prev[down_src]]] = True
        frontier = np.flatnonzero(cur)
        while frontier.size:
            nb = _gather(up_indptr, up_indices, frontier)
            nb = np.unique(nb[~cur[nb]])
            cur[nb] = True
            frontier = nb
        sweeps += 1
        if _finish(level, cur, iterations + 1) == 0:
            break
        iterations += 1
        prev = cur
    return iterations, sweeps


def simple_iteration_numpy(x, v1, v2, start, d):
    """One Jacobi sweep through the portrait: ``(b - A0 x) / d``."""
    n = len(x)
    acc = np.bincount(v1, weights=x[v2], minlength=n) + np.bincount(v2, weights=x[v1], minlength=n)
    out = -acc
    out[start] += 1.0
    return out / d


def gauss_seidel_sweep_numpy(x, indptr, indices, start, d):
    # sequential by definition; numpy offers no vector form of the ordered sweep
    for j in range(len(x)):
        s = 1.0 if j == start else 0.0
        for l in indices[indptr[j]:indptr[j + 1]]:
            s -= x[l]
        x[j] = s / d
    return x


# --- numba backend -------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def bfs_run_numba(indptr, indices, active, start, cap, level):
        n = level.shape[0]
        prev = np.zeros(n, dtype=np.bool_)
        new = np.zeros(n, dtype=np.bool_)
        prev[start] = True
        level[start] = 0
        iterations = 0
        sweeps = 0
        while sweeps < cap:
            fresh = 0
            for a in range(active.shape[0]):
                j = active[a]
                hit = prev[j]
                if not hit:
                    for p in range(indptr[j], indptr[j + 1]):
                        if prev[indices[p]]:
                            hit = True
                            break
                new[j] = hit
                if hit and level[j] < 0:
                    level[j] = iterations + 1
                    fresh += 1
            sweeps += 1
            if fresh == 0:
                break
            iterations += 1
            prev, new = new, prev
        return iterations, sweeps

    @njit(cache=True, nogil=True)
    def sis_run_numba(indptr, indices, active, start, cap, level):
        n = level.shape[0]
        prev = np.zeros(n, dtype=np.bool_)
        new = np.zeros(n, dtype=np.bool_)
        prev[start] = True
        level[start] = 0
        iterations = 0
        sweeps = 0
        while sweeps < cap:
            fresh = 0
            for a in range(active.shape[0]):
                j = active[a]
                hit = j == start
                if not hit:
                    for p in range(indptr[j], indptr[j + 1]):
                        if prev[indices[p]]:
                            hit = True
                            break
                new[j] = hit
                if hit and level[j] < 0:
                    level[j] = iterations + 1
                    fresh += 1
            sweeps += 1
            if fresh == 0:
                break
            iterations += 1
            prev, new = new, prev
        return iterations, sweeps

    @njit(cache=True, nogil=True)
    def gss_run_numba(indptr, indices, active, start, cap, level):
        # in-place update: entries below j already hold this sweep's values
        n = level.shape[0]
        cur = np.zeros(n, dtype=np.bool_)
        cur[start] = True
        level[start] = 0
        iterations = 0
        sweeps = 0
        while sweeps < cap:
            fresh = 0
            for a in range(active.shape[0]):
                j = active[a]
                hit = j == start
                if not hit:
                    for p in range(indptr[j], indptr[j + 1]):
                        if cur[indices[p]]:
                            hit = True
                            break
                cur[j] = hit
                if hit and level[j] < 0:
                    level[j] = iterations + 1
                    fresh += 1
            sweeps += 1
            if fresh == 0:
                break
            iterations += 1
        return iterations, sweeps

    @njit(cache=True, nogil=True)
    def simple_iteration_numba(x, v1, v2, start, d):
        n = x.shape[0]
        acc = np.zeros(n)
        for t in range(v1.shape[0]):
            i = v1[t]
            j = v2[t]
            acc[i] += x[j]
            acc[j] += x[i]
        for i in range(n):
            if i == start:
                acc[i] = (1.0 - acc[i]) / d
            else:
                acc[i] = (0.0 - acc[i]) / d
        return acc

    @njit(cache=True, nogil=True)
    def gauss_seidel_sweep_numba(x, indptr, indices, start, d):
        for j in range(x.shape[0]):
            s = 1.0 if j == start else 0.0
            for p in range(indptr[j], indptr[j + 1]):
                s -= x[indices[p]]
            x[j] = s / d
        return x

    _NUMBA = {
        "bfs": bfs_run_numba,
        "sis": sis_run_numba,
        "gss": gss_run_numba,
        "simple_iteration": simple_iteration_numba,
        "gauss_seidel_sweep": gauss_seidel_sweep_numba,
    }
else:  # pragma: no cover
    _NUMBA = {}

_NUMPY = {
    "bfs": bfs_run_numpy,
    "sis": sis_run_numpy,
    "gss": gss_run_numpy,
    "simple_iteration": simple_iteration_numpy,
    "gauss_seidel_sweep": gauss_seidel_sweep_numpy,
}


def get(name: str, backend: str | None = None):
    backend = backend or default_backend()
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not importable")
        return _NUMBA[name]
    if backend == "numpy":
        return _NUMPY[name]
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
