"""Cross-checks of every strategy against the oracle, and the exact invariant suite."""

from __future__ import annotations

from fractions import Fraction

from .detlab import ENUM_CAP, closed_form_gap, minor_det
from .exact import EXACT_CAP, delta_bound, inverse_columns, perturb_component, perturbation_response
from .graph import Graph, MatrixParams
from .oracle import eccentricity, uf_components
from .traversal import SWEEP_STRATEGIES, components_via


def verify_strategies(g: Graph, *, backend: str | None = None, exact_cap: int = EXACT_CAP) -> dict:
    """Run every applicable strategy and compare with union-find."""
    truth = uf_components(g)
    adj = g.neighbors()
    report: dict = {"n": g.n, "m": g.m, "K": truth.K, "strategies": {}}
    ok = True
    strategies = list(SWEEP_STRATEGIES) + (["exact-perturb"] if g.n <= exact_cap else [])
    for s in strategies:
        res = components_via(g, s, backend=backend, keep_traces=False, exact_cap=exact_cap)
        entry = {"K": res.K, "match": res.partition == truth, "iterations": res.total_iterations}
        if s == "gss":
            entry["within_eccentricity"] = all(
                it <= eccentricity(g, st, adj) for st, it in zip(res.starts, res.iterations)
            )
            ok &= entry["within_eccentricity"]
        ok &= entry["match"]
        report["strategies"][s] = entry
    if g.n > exact_cap:
        report["skipped"] = [f"exact-perturb (n > {exact_cap})"]
    report["ok"] = ok
    return report


def exact_invariants(g: Graph, params: MatrixParams | None = None, *, d_offsets=(0, 1, 2), cap: int = EXACT_CAP) -> dict:
    """Membership, gap bound, closed-form gap and norm checks in exact arithmetic."""
    params = params or MatrixParams.for_graph(g)
    truth = uf_components(g)
    lab = truth.labels(g.n)
    checks: dict[str, bool] = {}

    membership = True
    for off in d_offsets:
        p = MatrixParams(params.mu, params.d + off, params.epsilon)
        for i in range(1, g.n + 1):
            comp = perturb_component(g, p, i, cap=cap)
            expected = {j for j in range(1, g.n + 1) if lab[j - 1] == lab[i - 1]}
            membership &= comp == expected
    checks["membership_matches_oracle"] = membership

    delta = delta_bound(max(g.n, 1), params.d)
    gap_ok = norm_ok = True
    min_gap = None
    for i in range(1, g.n + 1):
        x, xp = perturbation_response(g, params, i, cap=cap)
        norm_ok &= x.norm1() <= 1
        for j in range(1, g.n + 1):
            if lab[j - 1] == lab[i - 1]:
                gap = abs(xp[j] - x[j])
                min_gap = gap if min_gap is None else min(min_gap, gap)
                if params.epsilon == 1 and truth.K == 1:
                    gap_ok &= gap >= delta
    checks["norm1_at_most_1"] = norm_ok
    if params.epsilon == 1 and truth.K == 1:
        checks["gap_at_least_delta"] = gap_ok

    if g.n <= min(ENUM_CAP, 8):
        closed = True
        for i in range(1, g.n + 1):
            x, xp = perturbation_response(g, params, i, cap=cap)
            for j in range(1, g.n + 1):
                closed &= abs(xp[j] - x[j]) == closed_form_gap(g, params, i, j)
        checks["closed_form_gap"] = closed

    det_a, _ = inverse_columns(g, params.d)
    checks["det_positive"] = det_a > 0
    checks["det_at_most_d_pow_n"] = det_a <= params.d ** g.n
    if g.n >= 1:
        principal = [minor_det(g, params, i, i, cap=cap) for i in range(1, g.n + 1)]
        checks["principal_minors_in_range"] = all(0 < v <= params.d ** (g.n - 1) for v in principal)

    return {
        "n": g.n,
        "d": str(params.d),
        "delta": str(delta),
        "min_gap": None if min_gap is None else str(min_gap),
        "checks": checks,
        "ok": all(checks.values()),
    }


def gap_table(g: Graph, params: MatrixParams) -> list[tuple[int, int, Fraction]]:
    """``(i, j, |x'_j - x_j|)`` for every ordered pair."""
    out = []
    for i in range(1, g.n + 1):
        x, xp = perturbation_response(g, params, i)
        out.extend((i, j, abs(xp[j] - x[j])) for j in range(1, g.n + 1))
    return out
