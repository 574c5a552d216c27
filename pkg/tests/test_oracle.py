import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perturbcc.graph import Graph, gen_random_graph, path_graph
from perturbcc.oracle import UnionFind, bfs_levels, bfs_partition, diameter, eccentricity, uf_components


def test_union_find_basics():
    uf = UnionFind(5)
    assert uf.union(0, 1)
    assert uf.union(3, 4)
    assert not uf.union(1, 0)
    assert uf.find(0) == uf.find(1)
    assert uf.find(2) != uf.find(3)


def test_levels_on_example(example8):
    lv = bfs_levels(example8, 1)
    assert [set(l) for l in lv.levels] == [{1}, {2}, {3, 6}, {4, 5, 7}, {8}]
    assert lv.component == frozenset(range(1, 9))


def test_eccentricity_and_diameter(example8):
    assert eccentricity(example8, 1) == 4
    assert eccentricity(example8, 3) == 3
    assert diameter(example8) == 4
    assert diameter(path_graph(6)) == 5
    assert diameter(Graph(3, np.empty((0, 2), dtype=np.int64))) == 0


def test_isolated_vertex_is_own_component():
    g = Graph.from_edges(4, [(1, 2)])
    assert uf_components(g).to_lists() == [[1, 2], [3], [4]]


def test_bad_start():
    with pytest.raises(ValueError):
        bfs_levels(path_graph(3), 4)


@given(n=st.integers(1, 30), frac=st.floats(0, 1), seed=st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_two_oracles_agree(n, frac, seed):
    g = gen_random_graph(n, int(frac * n * (n - 1) // 2), seed)
    assert uf_components(g) == bfs_partition(g)
