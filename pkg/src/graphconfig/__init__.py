"""Discretized configuration spaces of graphs.

Build the space of n non-colliding robots on a multigraph as an explicit
cube complex, compute its topology (Euler characteristic, Betti numbers,
surface type, curvature via vertex links), check and repair the
discretization conditions, and plan collision-free motions on the
1-skeleton.
"""

from .complexes import (
    DEFAULT_CELL_BUDGET,
    LABELED,
    UNLABELED,
    BudgetError,
    CellFactor,
    Configuration,
    CubeCell,
    CubeComplex,
    Face,
    MoveEdge,
    MoveGraph,
    SelfLoopError,
    boundary_matrix,
    build,
    complex_to_json,
    connected_components,
    one_skeleton,
    verify_dd_zero,
)
from .graphs import (
    Edge,
    Graph,
    GraphParseError,
    SufficiencyReport,
    Vertex,
    builtin,
    check_sufficiency,
    essential_separation,
    essential_vertices,
    girth,
    parse_graph,
    serialize_graph,
    subdivide,
    subdivide_for,
)
from .planner import (
    Move,
    Plan,
    PlanCheck,
    UnreachableGoalError,
    compress,
    plan,
    plan_to_json,
    validate,
)
from .topology import (
    BettiVector,
    BouquetRank,
    DualityReport,
    FlagLinkReport,
    LinkComplex,
    SurfaceReport,
    betti_numbers,
    bouquet_rank,
    duality_compare,
    flag_link_check,
    surface_classify,
    topology_report,
    vertex_link,
)

__all__ = [name for name in dir() if not name.startswith("_")]
