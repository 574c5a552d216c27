"""Connected components through perturbations of the graph matrix and
solver-ordered traversals."""

from .exact import (
    EXACT_CAP,
    BoundReport,
    ExactCapError,
    ExactVector,
    bound_report,
    delta_bound,
    gauss_seidel_solve,
    jacobi_solve,
    perturb_component,
    perturbation_response,
    required_iterations,
    required_mantissa,
    solve_exact,
)
from .graph import (
    ComponentPartition,
    Graph,
    GraphError,
    MatrixParams,
    Portrait,
    build_portrait,
    degrees,
    gen_chain_union,
    gen_random_graph,
    load_edge_list,
)
from .oracle import bfs_levels, diameter, eccentricity, uf_components
from .traversal import (
    Mask,
    ReachState,
    TraversalTrace,
    algebraic_bfs_component,
    components_via,
    gss_component,
    simple_iteration_portrait,
    sis_component,
)

__version__ = "0.1.0"
