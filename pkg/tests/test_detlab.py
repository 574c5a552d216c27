from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from perturbcc.detlab import (
    DetPolynomial,
    closed_form_gap,
    det_polynomial,
    identity_checks,
    implemented_permutations,
    implemented_permutations_bruteforce,
    minor_det,
    minor_det_via_graph,
    minor_graph,
    moved,
    sign,
)
from perturbcc.exact import ExactCapError, graph_matrix, perturbation_response, rational_det
from perturbcc.graph import Graph, MatrixParams, gen_random_graph, path_graph

from helpers import all_graphs

small_graphs = st.builds(
    lambda n, frac, seed: gen_random_graph(n, int(frac * n * (n - 1) // 2), seed),
    st.integers(1, 7),
    st.floats(0, 1),
    st.integers(0, 10**6),
)


def test_sign_and_moved():
    assert sign((1, 2, 3)) == 1
    assert sign((2, 1, 3)) == -1
    assert sign((2, 3, 1)) == 1
    assert moved((2, 1, 3)) == 2
    assert moved((1, 2, 3)) == 0


def test_triangle_polynomial():
    tri = Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
    p = det_polynomial(tri)
    assert p.coeffs == (1, 0, -3, 2)
    assert str(p) == "d^3 - 3d + 2"
    assert p(2) == 4


def test_single_edge_and_path_polynomials(single_edge):
    assert det_polynomial(single_edge).coeffs == (1, 0, -1)
    # path 1-2-3: d^3 - 2d
    assert det_polynomial(path_graph(3)).coeffs == (1, 0, -2, 0)
    # path on 4: d^4 - 3d^2 + 1
    assert det_polynomial(path_graph(4)).coeffs == (1, 0, -3, 0, 1)


def test_polynomial_str_edge_cases():
    assert str(DetPolynomial((1,))) == "1"
    assert str(DetPolynomial((1, 0))) == "d"
    assert str(DetPolynomial((1, -1, 0))) == "d^2 - d"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_bruteforce_exhaustive(n):
    for g in all_graphs(n):
        assert implemented_permutations(g) == implemented_permutations_bruteforce(g)


@given(g=small_graphs)
@settings(max_examples=60, deadline=None)
def test_polynomial_matches_elimination(g):
    poly = det_polynomial(g)
    for d in (Fraction(g.n + 1), Fraction(7, 3), Fraction(-2)):
        assert Fraction(poly(d)) == rational_det(graph_matrix(g, d))


@given(g=small_graphs)
@settings(max_examples=60, deadline=None)
def test_low_coefficients(g):
    c = det_polynomial(g).coeffs
    assert c[0] == 1
    if g.n >= 1:
        assert c[1] == 0
    if g.n >= 2:
        assert c[2] == -g.m


def test_minor_graph_arcs():
    mg = minor_graph(path_graph(3), 1, 3)
    assert mg.arcs == frozenset({(1, 3), (2, 1), (3, 2)})
    with pytest.raises(ValueError):
        minor_graph(path_graph(3), 2, 2)


@given(g=small_graphs, data=st.data())
@settings(max_examples=60, deadline=None)
def test_minor_identity_with_cofactor_sign(g, data):
    if g.n < 2:
        return
    i, j = data.draw(st.lists(st.integers(1, g.n), min_size=2, max_size=2, unique=True))
    p = MatrixParams.for_graph(g)
    assert minor_det(g, p, i, j) == minor_det_via_graph(g, p, i, j)


def test_minor_identity_needs_the_sign():
    g = path_graph(2)
    p = MatrixParams.for_graph(g)
    mg = minor_graph(g, 1, 2)
    plain = rational_det(mg.matrix(p.d))
    assert minor_det(g, p, 1, 2) == -plain


@given(g=small_graphs, data=st.data())
@settings(max_examples=40, deadline=None)
def test_closed_form_gap_matches_solves(g, data):
    p = MatrixParams.for_graph(g)
    i = data.draw(st.integers(1, g.n))
    x, xp = perturbation_response(g, p, i)
    for j in range(1, g.n + 1):
        assert abs(xp[j] - x[j]) == closed_form_gap(g, p, i, j)


def test_identity_checks_example(example8):
    report = identity_checks(example8)
    assert report["ok"], report["checks"]
    assert report["coefficients"][:3] == [1, 0, -8]


def test_identity_checks_disconnected():
    g = Graph.from_edges(5, [(1, 2), (3, 4)])
    report = identity_checks(g)
    assert report["ok"], report["checks"]
    assert report["K"] == 3


def test_enumeration_cap():
    with pytest.raises(ExactCapError):
        det_polynomial(path_graph(10))
