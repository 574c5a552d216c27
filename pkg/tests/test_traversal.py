import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perturbcc.graph import Graph, MatrixParams, build_portrait, gen_chain_union, gen_random_graph, path_graph
from perturbcc.oracle import bfs_levels, eccentricity, uf_components
from perturbcc.traversal import (
    Mask,
    ReachState,
    algebraic_bfs_component,
    canonical_strategy,
    components_via,
    gss_component,
    simple_iteration_portrait,
    sis_component,
)

from helpers import random_small_graphs

graphs = st.builds(
    lambda n, frac, seed: gen_random_graph(n, int(frac * n * (n - 1) // 2), seed),
    st.integers(1, 40),
    st.floats(0, 0.25),
    st.integers(0, 10**6),
)

EXAMPLE_LEVELS = [{2}, {3, 6}, {4, 5, 7}, {8}]


def _sets(trace):
    return [set(s) for s in trace.newly_reached]


@pytest.mark.parametrize("mode", ["pattern", "float"])
def test_example_traces(example8, backend, mode):
    comp, t = sis_component(example8, 1, backend=backend, mode=mode)
    assert comp == frozenset(range(1, 9))
    assert _sets(t) == EXAMPLE_LEVELS
    assert t.iterations_used == 4
    _, t = algebraic_bfs_component(example8, 1, backend=backend, mode=mode)
    assert _sets(t) == EXAMPLE_LEVELS
    _, t = gss_component(example8, 1, backend=backend, mode=mode)
    assert _sets(t) == [{2, 3, 4, 6, 7, 8}, {5}]
    assert t.iterations_used == 2
    assert t.sweeps == 3


@pytest.mark.parametrize("mode", ["pattern", "float"])
def test_path_orderings(path5, path5_reordered, backend, mode):
    _, t = gss_component(path5, 1, backend=backend, mode=mode)
    assert t.iterations_used == 1
    _, t = sis_component(path5, 1, backend=backend, mode=mode)
    assert t.iterations_used == 4
    _, t = gss_component(path5_reordered, 1, backend=backend, mode=mode)
    assert _sets(t) == [{5}, {4}, {3}, {2}]


def test_trace_records_and_jsonl(example8):
    _, t = gss_component(example8, 1)
    assert t.records() == [{"k": 1, "new": [2, 3, 4, 6, 7, 8]}, {"k": 2, "new": [5]}]
    lines = [json.loads(l) for l in t.to_jsonl().splitlines()]
    assert lines == t.records()
    assert t.reached_after(1) == frozenset({1, 2, 3, 4, 6, 7, 8})
    assert t.reached_after(0) == frozenset({1})


def test_reach_state_initial():
    s = ReachState.initial(4, 3)
    assert s.vertices() == frozenset({3})
    assert s.k == 0


def test_isolated_start_needs_zero_iterations(backend):
    g = Graph.from_edges(3, [(2, 3)])
    comp, t = gss_component(g, 1, backend=backend)
    assert comp == frozenset({1})
    assert (t.iterations_used, t.sweeps) == (0, 1)


def test_masked_start_rejected():
    g = path_graph(3)
    m = Mask.none(3)
    m.add([2])
    with pytest.raises(ValueError):
        sis_component(g, 2, mask=m)


def test_aliases():
    assert canonical_strategy("bfs") == "algebraic-bfs"
    assert canonical_strategy("exact") == "exact-perturb"
    with pytest.raises(ValueError):
        canonical_strategy("dfs")


def test_simple_iteration_on_portrait(backend):
    g = path_graph(3)
    p = build_portrait(g)
    out = simple_iteration_portrait([1.0, 0.0, 0.0], p, MatrixParams.for_graph(g, d=4), 1, backend=backend)
    np.testing.assert_allclose(out, [0.25, -0.25, 0.0])


@given(g=graphs, data=st.data())
@settings(max_examples=200, deadline=None)
def test_sis_and_bfs_levels_equal_oracle_levels(g, data):
    start = data.draw(st.integers(1, g.n))
    lv = bfs_levels(g, start)
    expected = [set(l) for l in lv.levels[1:]]
    _, ts = sis_component(g, start)
    _, tb = algebraic_bfs_component(g, start)
    assert _sets(ts) == expected
    assert _sets(tb) == expected


@given(g=graphs, data=st.data())
@settings(max_examples=200, deadline=None)
def test_gss_reaches_at_least_sis_each_sweep(g, data):
    start = data.draw(st.integers(1, g.n))
    comp_s, ts = sis_component(g, start)
    comp_g, tg = gss_component(g, start)
    assert comp_s == comp_g
    for k in range(ts.iterations_used + 1):
        assert ts.reached_after(k) <= tg.reached_after(k)
    assert tg.iterations_used <= eccentricity(g, start)


@given(length=st.integers(1, 40), seed=st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_gss_chain_rule(length, seed):
    # the first step along a chain always takes one sweep; after that each
    # descent in the label sequence costs one more
    rng = np.random.default_rng(seed)
    labels = (rng.permutation(length) + 1).tolist()
    g = Graph.from_edges(length, list(zip(labels, labels[1:])))
    _, t = gss_component(g, labels[0])
    descents = sum(1 for a, b in zip(labels[1:], labels[2:]) if b < a)
    assert t.iterations_used == (descents + 1 if length > 1 else 0)


@pytest.mark.parametrize("strategy", ["algebraic-bfs", "sis", "gss", "exact-perturb"])
def test_partition_matches_oracle(strategy, backend):
    for g in random_small_graphs(40, 14, seed=11):
        res = components_via(g, strategy, backend=backend)
        assert res.partition == uf_components(g)
        res.partition.validate(g)


@given(g=graphs)
@settings(max_examples=80, deadline=None)
def test_masking_does_not_change_results(g):
    for s in ("algebraic-bfs", "sis", "gss"):
        a = components_via(g, s, masking=True)
        b = components_via(g, s, masking=False)
        assert a.partition == b.partition
        assert a.iterations == b.iterations
        assert a.starts == b.starts


def test_first_start_goes_first(example8):
    g = Graph.from_edges(5, [(1, 2), (4, 5)])
    res = components_via(g, "gss", first_start=4)
    assert res.starts == [4, 1, 3]
    assert res.K == 3


def test_json_shape():
    g = gen_chain_union(3, 4, seed=1)
    out = components_via(g, "sis").to_json(with_traces=True)
    assert out["K"] == 3
    assert out["iterations"] == sum(out["iterations_per_component"])
    assert all(1 <= k <= 3 for k in out["iterations_per_component"])
    assert len(out["traces"]) == 3
    json.dumps(out)


def test_exact_strategy_reports_no_sweeps():
    res = components_via(path_graph(4), "exact")
    assert res.iterations == [0]
    assert res.partition.to_lists() == [[1, 2, 3, 4]]
