import pytest

from perturbcc._kernels import HAVE_NUMBA
from perturbcc.graph import Graph, example_graph, path_graph, path_graph_reordered

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=["numba", "numpy"] if HAVE_NUMBA else ["numpy"])
def backend(request):
    return request.param


@pytest.fixture
def example8():
    return example_graph()


@pytest.fixture
def path5():
    return path_graph(5)


@pytest.fixture
def path5_reordered():
    return path_graph_reordered()


@pytest.fixture
def single_edge():
    return Graph.from_edges(2, [(1, 2)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
