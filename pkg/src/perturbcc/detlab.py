"""Brute-force determinant laboratory for small graphs.

``det(A0 + d*I)`` is a polynomial in ``d`` whose coefficients count the
permutations realised by the graph's oriented edges and loops, signed by
parity.  Everything here enumerates; nothing is meant to scale past n = 9.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exact import EXACT_CAP, ExactCapError, exact_det, graph_matrix, integer_matrix, rational_det
from .graph import Graph, MatrixParams
from .oracle import uf_components

ENUM_CAP = 9

Perm = tuple[int, ...]


def _check_enum(n: int) -> None:
    if n > ENUM_CAP:
        raise ExactCapError(f"permutation enumeration is limited to n <= {ENUM_CAP} (got n={n})")


def sign(perm: Perm) -> int:
    """Parity sign of a 1-based permutation tuple."""
    seen = [False] * len(perm)
    cycles = 0
    for s in range(len(perm)):
        if not seen[s]:
            cycles += 1
            v = s
            while not seen[v]:
                seen[v] = True
                v = perm[v] - 1
    return -1 if (len(perm) - cycles) % 2 else 1


def moved(perm: Perm) -> int:
    """Number of non-fixed points, i.e. total length of the non-loop cycles."""
    return sum(1 for i, p in enumerate(perm, start=1) if p != i)


def _enumerate(n: int, allowed: list[set[int]]) -> Iterator[Perm]:
    """Permutations with ``perm[i-1] in allowed[i]`` for every row, by backtracking."""
    used = [False] * (n + 1)
    perm = [0] * n

    def rec(i: int):
        if i > n:
            yield tuple(perm)
            return
        for c in sorted(allowed[i]):
            if not used[c]:
                used[c] = True
                perm[i - 1] = c
                yield from rec(i + 1)
                used[c] = False

    yield from rec(1)


def implemented_permutations(g: Graph, params: MatrixParams | None = None) -> set[Perm]:
    """All permutations whose every pair ``(i, pi(i))`` is a loop or an oriented edge.

    Loops carry the weight ``d > 0`` so every fixed point is allowed; the
    params only matter through that positivity.
    """
    _check_enum(g.n)
    if params is not None and params.d <= 0:
        raise ValueError("loop weight must be positive")
    adj = g.neighbors()
    allowed = [set()] + [{i, *adj[i]} for i in range(1, g.n + 1)]
    return set(_enumerate(g.n, allowed))


def implemented_permutations_bruteforce(g: Graph, d=2) -> set[Perm]:
    """Same set by scanning all of S_n and keeping positive products."""
    _check_enum(g.n)
    a = graph_matrix(g, d)
    out = set()
    for perm in itertools.permutations(range(1, g.n + 1)):
        prod = Fraction(1)
        for i, p in enumerate(perm):
            prod *= a[i][p - 1]
            if prod == 0:
                break
        if prod > 0:
            out.add(perm)
    return out


@dataclass(frozen=True)
class DetPolynomial:
    """``det A(d) = sum_l c_l d^(n-l)``; ``coeffs[l] = c_l`` for ``l = 0..n``."""

    coeffs: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, d) -> Fraction | int:
        value = 0
        for c in self.coeffs:
            value = value * d + c
        return value

    def __str__(self) -> str:
        terms = []
        for l, c in enumerate(self.coeffs):
            if c == 0:
                continue
            p = self.n - l
            mono = "" if p == 0 else ("d" if p == 1 else f"d^{p}")
            coef = str(c) if (abs(c) != 1 or not mono) else ("-" if c < 0 else "")
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def det_polynomial(g: Graph) -> DetPolynomial:
    coeffs = [0] * (g.n + 1)
    for perm in implemented_permutations(g):
        coeffs[moved(perm)] += sign(perm)
    return DetPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class DirectedMinorGraph:
    """Oriented graph whose matrix has the same determinant as the (i, j) minor
    up to the cofactor sign ``(-1)^(i+j)``.
    """

    n: int
    i: int
    j: int
    arcs: frozenset[tuple[int, int]]

    def matrix(self, d) -> list[list[Fraction]]:
        d = Fraction(d)
        a = [[Fraction(0)] * self.n for _ in range(self.n)]
        for v in range(1, self.n + 1):
            if v not in (self.i, self.j):
                a[v - 1][v - 1] = d
        for u, w in self.arcs:
            a[u - 1][w - 1] = Fraction(1)
        return a

    def permutations(self) -> set[Perm]:
        _check_enum(self.n)
        allowed = [set()] + [set() for _ in range(self.n)]
        for v in range(1, self.n + 1):
            if v not in (self.i, self.j):
                allowed[v].add(v)
        for u, w in self.arcs:
            allowed[u].add(w)
        return set(_enumerate(self.n, allowed))


def minor_graph(g: Graph, i: int, j: int) -> DirectedMinorGraph:
    """Orient every edge both ways, drop arcs leaving ``i`` and entering ``j``,
    then add the single arc ``(i, j)``.  The loops at ``i`` and ``j`` go too.
    """
    if i == j:
        raise ValueError("minor graph needs i != j; use minor_det(g, params, i, i) for the principal minor")
    for v in (i, j):
        if not 1 <= v <= g.n:
            raise ValueError(f"vertex {v} outside 1..{g.n}")
    arcs = set()
    for a, b in g.edges.tolist():
        for u, w in ((a, b), (b, a)):
            if u != i and w != j:
                arcs.add((u, w))
    arcs.add((i, j))
    return DirectedMinorGraph(g.n, i, j, frozenset(arcs))


def minor_det(g: Graph, params: MatrixParams, i: int, j: int, *, cap: int = EXACT_CAP) -> Fraction:
    """Exact determinant of ``A`` with row ``i`` and column ``j`` removed."""
    if g.n > cap:
        raise ExactCapError(f"exact mode is limited to n <= {cap} vertices (got n={g.n})")
    rows, scale = integer_matrix(g, params.d)
    sub = [row[:j - 1] + row[j:] for r, row in enumerate(rows) if r != i - 1]
    return Fraction(exact_det(sub), scale ** (g.n - 1))


def minor_det_via_graph(g: Graph, params: MatrixParams, i: int, j: int) -> Fraction:
    """``(-1)^(i+j) det A(G_ij)``, summed over the permutations ``G_ij`` realises."""
    mg = minor_graph(g, i, j)
    a = mg.matrix(params.d)
    total = Fraction(0)
    for perm in mg.permutations():
        term = Fraction(sign(perm))
        for r, p in enumerate(perm):
            term *= a[r][p - 1]
        total += term
    return total * (-1) ** (i + j)


def closed_form_gap(g: Graph, params: MatrixParams, i: int, j: int) -> Fraction:
    """Closed form of ``|x'_j - x_j|`` from three determinants."""
    eps = params.epsilon
    det_a = rational_det(graph_matrix(g, params.d))
    det_ii = minor_det(g, params, i, i)
    det_ij = minor_det(g, params, i, j)
    return eps * det_ii * abs(det_ij) / (det_a * (det_a + eps * det_ii))


def identity_checks(g: Graph, params: MatrixParams | None = None) -> dict:
    """Run the coefficient, evaluation, minor and sign checks on one graph.

    Returns a JSON-ready dict; ``result["ok"]`` is the conjunction.
    """
    _check_enum(g.n)
    params = params or MatrixParams.for_graph(g)
    poly = det_polynomial(g)
    c = poly.coeffs
    checks: dict[str, bool] = {}
    checks["c0_is_1"] = c[0] == 1
    checks["c1_is_0"] = g.n < 1 or c[1] == 0
    checks["c2_is_minus_m"] = g.n < 2 or c[2] == -g.m

    d0 = params.d
    evals = []
    for d in (d0, d0 + 1):
        direct = rational_det(graph_matrix(g, d))
        evals.append({"d": str(d), "polynomial": str(Fraction(poly(d))), "elimination": str(direct)})
        checks.setdefault("polynomial_matches_elimination", True)
        checks["polynomial_matches_elimination"] &= Fraction(poly(d)) == direct

    det_a = rational_det(graph_matrix(g, d0))
    checks["det_positive"] = det_a > 0
    checks["det_at_most_d_pow_n"] = det_a <= d0 ** g.n

    part = uf_components(g)
    comp_of = part.labels(g.n)
    same_comp = cross_zero = minor_identity = principal_ok = True
    for i in range(1, g.n + 1):
        det_ii = minor_det(g, params, i, i)
        principal_ok &= 0 < det_ii <= d0 ** (g.n - 1)
        for j in range(1, g.n + 1):
            if i == j:
                continue
            det_ij = minor_det(g, params, i, j)
            minor_identity &= det_ij == minor_det_via_graph(g, params, i, j)
            if comp_of[i - 1] == comp_of[j - 1]:
                if part.K == 1:
                    same_comp &= abs(det_ij) >= 1
            else:
                cross_zero &= det_ij == 0
    checks["principal_minors_positive_and_bounded"] = principal_ok
    checks["minor_graph_identity"] = minor_identity
    checks["cross_component_minor_zero"] = cross_zero
    checks["same_component_minor_at_least_1"] = same_comp
    return {
        "n": g.n,
        "m": g.m,
        "K": part.K,
        "d": str(d0),
        "coefficients": list(c),
        "polynomial": str(poly),
        "evaluations": evals,
        "checks": checks,
        "ok": all(checks.values()),
    }
