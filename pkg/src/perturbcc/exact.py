"""Perturbation membership test in exact arithmetic, plus the accuracy bounds.

The matrix is ``A = A0 + d*I`` and its perturbation ``A' = A + eps*E_i``.
Solves use fraction-free (Bareiss) elimination on the matrix scaled to
integers, so every solution entry is an exact rational and the comparison
``x'_j != x_j`` needs no tolerance.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import Graph, MatrixParams, build_portrait

EXACT_CAP = 64


class ExactCapError(ValueError):
    """Graph too large for exact rational elimination."""


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ExactCapError(f"exact mode is limited to n <= {cap} vertices (got n={n}); use a traversal strategy")


def _check_vertex(g: Graph, v: int) -> None:
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} outside 1..{g.n}")


# --- exact linear algebra ------------------------------------------------

def integer_matrix(g: Graph, d, perturb: int | None = None, epsilon=0) -> tuple[list[list[int]], int]:
    """``scale * (A0 + d*I + epsilon*E_perturb)`` as integer rows, and ``scale``."""
    d = Fraction(d)
    epsilon = Fraction(epsilon)
    scale = math.lcm(d.denominator, epsilon.denominator)
    diag = int(d * scale)
    rows = [[0] * g.n for _ in range(g.n)]
    for v in range(g.n):
        rows[v][v] = diag
    for i, j in g.edges.tolist():
        rows[i - 1][j - 1] = scale
        rows[j - 1][i - 1] = scale
    if perturb is not None:
        rows[perturb - 1][perturb - 1] += int(epsilon * scale)
    return rows, scale


def bareiss(rows: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]] = ()) -> tuple[int, int, list[list[int]]]:
    """Fraction-free elimination of ``M X = R``.

    ``rhs`` holds the right-hand sides as columns.  Returns ``(det, D, X)``
    where ``det = det(M)``, ``D = ±det(M)`` is the last pivot and ``X`` (one
    list per right-hand side) is the integer matrix ``D * M^{-1} R``.
    Raises ``ZeroDivisionError`` for a singular ``M``.
    """
    n = len(rows)
    r = len(rhs)
    a = [list(rows[i]) + [rhs[c][i] for c in range(r)] for i in range(n)]
    width = n + r
    sign = 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                raise ZeroDivisionError("singular matrix")
        row_k = a[k]
        akk = row_k[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            if aik == 0:
                if akk != prev:
                    for j in range(k + 1, width):
                        row_i[j] = akk * row_i[j] // prev
            else:
                for j in range(k + 1, width):
                    row_i[j] = (akk * row_i[j] - aik * row_k[j]) // prev
                row_i[k] = 0
        prev = akk
    if n == 0:
        return 1, 1, [[] for _ in range(r)]
    D = a[n - 1][n - 1]
    cols = []
    for c in range(r):
        x = [0] * n
        for i in range(n - 1, -1, -1):
            row = a[i]
            s = D * row[n + c]
            for j in range(i + 1, n):
                if row[j]:
                    s -= row[j] * x[j]
            q, rem = divmod(s, row[i])
            assert rem == 0, "inexact back substitution"
            x[i] = q
        cols.append(x)
    return sign * D, D, cols


def exact_det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    try:
        det, _, _ = bareiss(rows)
    except ZeroDivisionError:
        return 0
    return det


def rational_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a rational matrix via scaling to integers."""
    if not matrix:
        return Fraction(1)
    scale = 1
    for row in matrix:
        for v in row:
            scale = math.lcm(scale, Fraction(v).denominator)
    rows = [[int(Fraction(v) * scale) for v in row] for row in matrix]
    return Fraction(exact_det(rows), scale ** len(rows))


def graph_matrix(g: Graph, d, perturb: int | None = None, epsilon=0) -> list[list[Fraction]]:
    """Dense rational ``A0 + d*I (+ epsilon*E_perturb)``."""
    rows, scale = integer_matrix(g, d, perturb, epsilon)
    return [[Fraction(v, scale) for v in row] for row in rows]


@dataclass(frozen=True)
class ExactVector:
    entries: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: int) -> Fraction:
        """1-based access, matching vertex labels."""
        return self.entries[j - 1]

    def norm1(self) -> Fraction:
        return sum((abs(v) for v in self.entries), Fraction(0))

    def to_json(self) -> list[str]:
        return [str(v) for v in self.entries]


def _solve(g: Graph, d, rhs_index: int, perturb: int | None, epsilon) -> ExactVector:
    rows, scale = integer_matrix(g, d, perturb, epsilon)
    b = [0] * g.n
    b[rhs_index - 1] = 1
    _, D, (X,) = bareiss(rows, [b])
    # (scale*A) x = b  =>  A x = e_i needs x scaled back by `scale`
    return ExactVector(tuple(Fraction(v * scale, D) for v in X))


def solve_exact(g: Graph, params: MatrixParams, rhs_index: int, *, perturbed: bool = False, cap: int = EXACT_CAP) -> ExactVector:
    """Exact solution of ``A x = e_i`` (or ``A' x' = e_i`` when ``perturbed``)."""
    _check_cap(g.n, cap)
    _check_vertex(g, rhs_index)
    params.check(g)
    if perturbed:
        return _solve(g, params.d, rhs_index, rhs_index, params.epsilon)
    return _solve(g, params.d, rhs_index, None, 0)


def perturbation_response(g: Graph, params: MatrixParams, i: int, *, cap: int = EXACT_CAP) -> tuple[ExactVector, ExactVector]:
    """Both solutions ``x`` (unperturbed) and ``x'`` (vertex ``i`` perturbed)."""
    return (solve_exact(g, params, i, cap=cap), solve_exact(g, params, i, perturbed=True, cap=cap))


def perturb_component(g: Graph, params: MatrixParams, i: int, *, cap: int = EXACT_CAP) -> frozenset[int]:
    """Vertices whose solution entry responds to perturbing vertex ``i``."""
    x, xp = perturbation_response(g, params, i, cap=cap)
    changed = {j for j in range(1, g.n + 1) if xp[j] != x[j]}
    return frozenset(changed | {i})


def inverse_columns(g: Graph, d) -> tuple[Fraction, list[list[Fraction]]]:
    """``det A`` and all columns of ``A^{-1}`` from a single elimination."""
    rows, scale = integer_matrix(g, d)
    eye = [[int(r == c) for r in range(g.n)] for c in range(g.n)]
    det, D, cols = bareiss(rows, eye)
    return Fraction(det, scale ** g.n), [[Fraction(v * scale, D) for v in col] for col in cols]


# --- bound calculators ---------------------------------------------------

def delta_bound(n: int, d) -> Fraction:
    """Guaranteed gap ``1 / (2 d^(2n))`` between responding entries when eps = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = Fraction(d)
    if d <= 1:
        raise ValueError("d must exceed 1")
    return 1 / (2 * d ** (2 * n))


def _least_power(base: Fraction, target: Fraction) -> int:
    """Smallest integer t >= 0 with ``base**t >= target`` (base > 1)."""
    if target <= 1:
        return 0
    log = lambda q: math.log(q.numerator) - math.log(q.denominator)
    t = max(0, math.ceil(log(target) / log(base)))
    power = base ** t
    while power < target:
        power *= base
        t += 1
    while t > 0 and power / base >= target:
        power /= base
        t -= 1
    return t


def required_iterations(n: int, mu, d=None) -> int:
    """Sweeps ``N = ceil(2n log_mu(d) + 1)`` that push the iteration error below delta/4.

    ``d`` defaults to ``mu**2``, i.e. the ``mu = d_max`` convention, where the
    result is exactly ``4n + 1``.
    """
    mu = Fraction(mu)
    if mu <= 1:
        raise ValueError("mu must exceed 1")
    d = mu * mu if d is None else Fraction(d)
    if d <= 1:
        raise ValueError("d must exceed 1")
    # N - 1 >= 2n log_mu d  <=>  mu^(N-1) >= d^(2n)
    return 1 + _least_power(mu, d ** (2 * n))


def required_mantissa(n: int, d=None, mu=None) -> int:
    """Decimal digits ``L = ceil(2n lg d + 1)`` needed to resolve delta.

    With only ``mu`` given, ``d = mu**2``.
    """
    if d is None:
        if mu is None:
            raise ValueError("give d or mu")
        d = Fraction(mu) ** 2
    d = Fraction(d)
    if d <= 1:
        raise ValueError("d must exceed 1")
    # L - 1 >= 2n lg d  <=>  10^(L-1) >= d^(2n)
    return 1 + _least_power(Fraction(10), d ** (2 * n))


@dataclass(frozen=True)
class BoundReport:
    n: int
    mu: Fraction
    d: Fraction
    delta: Fraction
    iterations: int
    mantissa: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mu": str(self.mu),
            "d": str(self.d),
            "delta": str(self.delta),
            "iterations": self.iterations,
            "mantissa_digits": self.mantissa,
        }


def bound_report(g: Graph, params: MatrixParams) -> BoundReport:
    n = max(g.n, 1)
    return BoundReport(
        n=g.n,
        mu=params.mu,
        d=params.d,
        delta=delta_bound(n, params.d),
        iterations=required_iterations(n, params.mu, params.d),
        mantissa=required_mantissa(n, params.d),
    )


# --- iterative solves with error logs ------------------------------------

@dataclass
class SolveLog:
    """Iterates of a stationary solver together with their exact errors.

    ``errors_l1[k]`` is ``||x - x^(k)||_1`` and ``errors_max[k]`` the largest
    entry error, both as exact rationals; index 0 is the start vector.
    """

    method: str
    arithmetic: str
    x: list
    errors_l1: list[Fraction] | None
    errors_max: list[Fraction] | None

    def ratios(self, norm: str = "l1") -> list[float]:
        errs = self.errors_l1 if norm == "l1" else self.errors_max
        if errs is None:
            raise ValueError("no exact solution available for error ratios")
        return [float(b / a) for a, b in zip(errs, errs[1:]) if a != 0]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "arithmetic": self.arithmetic,
            "x": [str(v) for v in self.x],
            "errors_l1": None if self.errors_l1 is None else [str(e) for e in self.errors_l1],
            "errors_max": None if self.errors_max is None else [str(e) for e in self.errors_max],
        }


def _errors(exact: Sequence[Fraction], approx) -> tuple[Fraction, Fraction]:
    diffs = [abs(e - Fraction(a)) for e, a in zip(exact, approx)]
    return sum(diffs, Fraction(0)), max(diffs, default=Fraction(0))


def _iterate(g, params, rhs_index, k_max, method, arithmetic, digits, backend, cap, exact):
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    _check_vertex(g, rhs_index)
    params.check(g)
    if exact is None and g.n <= cap:
        exact = solve_exact(g, params, rhs_index, cap=cap).entries
    elif exact is not None:
        exact = tuple(Fraction(v) for v in exact)
    portrait = build_portrait(g)
    start = rhs_index - 1

    if arithmetic == "float":
        d = float(params.d)
        x = np.zeros(g.n)
        x[start] = 1.0
        if method == "gauss-seidel":
            indptr, indices = portrait.csr
            sweep = _kernels.get("gauss_seidel_sweep", backend)
            step = lambda v: sweep(v, indptr, indices, start, d)
        else:
            kern = _kernels.get("simple_iteration", backend)
            step = lambda v: kern(v, portrait.v1, portrait.v2, start, d)
        snap = lambda v: v.tolist()
    elif arithmetic == "decimal":
        ctx = decimal.Context(prec=digits or required_mantissa(max(g.n, 1), params.d) + 10)
        dd = ctx.divide(decimal.Decimal(params.d.numerator), decimal.Decimal(params.d.denominator))
        x = [decimal.Decimal(int(v == start)) for v in range(g.n)]
        step = _decimal_step(g, portrait, start, dd, ctx, method)
        snap = list
    elif arithmetic == "exact":
        x = [Fraction(int(v == start)) for v in range(g.n)]
        step = _fraction_step(portrait, start, params.d, method)
        snap = list
    else:
        raise ValueError(f"unknown arithmetic {arithmetic!r}")

    errs_l1, errs_max = ([], []) if exact is not None else (None, None)

    def record(v):
        if exact is not None:
            e1, em = _errors(exact, snap(v))
            errs_l1.append(e1)
            errs_max.append(em)

    record(x)
    for _ in range(k_max):
        x = step(x)
        record(x)
    return SolveLog(method, arithmetic, snap(x), errs_l1, errs_max)


def _decimal_step(g, portrait, start, dd, ctx, method):
    indptr, indices = portrait.csr
    nbrs = [indices[indptr[j]:indptr[j + 1]].tolist() for j in range(g.n)]
    one = decimal.Decimal(1)
    zero = decimal.Decimal(0)

    def step(x):
        src = x if method == "gauss-seidel" else list(x)
        out = x if method == "gauss-seidel" else [zero] * g.n
        for j in range(g.n):
            s = one if j == start else zero
            for l in nbrs[j]:
                s = ctx.subtract(s, src[l])
            out[j] = ctx.divide(s, dd)
        return out

    return step


def _fraction_step(portrait, start, d, method):
    n = portrait.n
    indptr, indices = portrait.csr
    nbrs = [indices[indptr[j]:indptr[j + 1]].tolist() for j in range(n)]

    def step(x):
        src = x if method == "gauss-seidel" else list(x)
        out = x if method == "gauss-seidel" else [Fraction(0)] * n
        for j in range(n):
            s = Fraction(int(j == start)) - sum((src[l] for l in nbrs[j]), Fraction(0))
            out[j] = s / d
        return out

    return step


def gauss_seidel_solve(
    g: Graph,
    params: MatrixParams,
    rhs_index: int,
    k_max: int,
    *,
    arithmetic: str = "float",
    digits: int | None = None,
    backend: str | None = None,
    cap: int = EXACT_CAP,
    exact: Sequence[Fraction] | None = None,
) -> SolveLog:
    """``k_max`` Gauss-Seidel sweeps on ``A x = e_i`` from ``x0 = e_i``.

    ``arithmetic`` is ``"float"`` (float64 kernel), ``"decimal"`` (``digits``
    significant digits, default ``required_mantissa + 10``) or ``"exact"``.
    Errors are logged against ``exact`` when given, otherwise against
    :func:`solve_exact` when ``n <= cap``.
    """
    return _iterate(g, params, rhs_index, k_max, "gauss-seidel", arithmetic, digits, backend, cap, exact)


def jacobi_solve(
    g: Graph,
    params: MatrixParams,
    rhs_index: int,
    k_max: int,
    *,
    arithmetic: str = "float",
    digits: int | None = None,
    backend: str | None = None,
    cap: int = EXACT_CAP,
    exact: Sequence[Fraction] | None = None,
) -> SolveLog:
    """Jacobi (simple iteration) counterpart of :func:`gauss_seidel_solve`."""
    return _iterate(g, params, rhs_index, k_max, "jacobi", arithmetic, digits, backend, cap, exact)


def float_membership(g: Graph, params: MatrixParams, i: int, *, arithmetic: str = "decimal", iterations: int | None = None) -> frozenset[int]:
    """Membership test run the iterative way: N Gauss-Seidel sweeps on both
    systems, then ``|x'_j - x_j| > delta/2``.

    Only meaningful for small ``n``; float64 cannot resolve delta past a
    handful of vertices, which is why the default arithmetic is decimal with
    the required mantissa length.
    """
    n = max(g.n, 1)
    N = iterations or required_iterations(n, params.mu, params.d)
    delta = delta_bound(n, params.d)
    base = gauss_seidel_solve(g, params, i, N, arithmetic=arithmetic, cap=0).x
    shifted = _perturbed_gs(g, params, i, N, arithmetic)
    out = {j + 1 for j in range(g.n) if abs(Fraction(shifted[j]) - Fraction(base[j])) > delta / 2}
    return frozenset(out | {i})


def _perturbed_gs(g, params, i, N, arithmetic):
    # A' only differs in the diagonal entry of row i
    portrait = build_portrait(g)
    indptr, indices = portrait.csr
    nbrs = [indices[indptr[j]:indptr[j + 1]].tolist() for j in range(g.n)]
    if arithmetic == "decimal":
        ctx = decimal.Context(prec=required_mantissa(max(g.n, 1), params.d) + 10)
        conv = lambda f: ctx.divide(decimal.Decimal(f.numerator), decimal.Decimal(f.denominator))
        sub, div = ctx.subtract, ctx.divide
        x = [decimal.Decimal(int(v == i - 1)) for v in range(g.n)]
    elif arithmetic == "float":
        conv = float
        sub = lambda a, b: a - b
        div = lambda a, b: a / b
        x = [float(v == i - 1) for v in range(g.n)]
    else:
        raise ValueError(f"unsupported arithmetic {arithmetic!r}")
    diag = [conv(params.d + (params.epsilon if j == i - 1 else 0)) for j in range(g.n)]
    for _ in range(N):
        for j in range(g.n):
            s = conv(Fraction(int(j == i - 1)))
            for l in nbrs[j]:
                s = sub(s, x[l])
            x[j] = div(s, diag[j])
    return x
