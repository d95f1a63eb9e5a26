"""Exact solution concepts for path cooperative games on unit-capacity networks."""

from .exactlp import LinearProgram, certify, format_rational, parse_rational, solve
from .games import (
    EDGE,
    FLOW,
    VERTEX,
    CoreStatus,
    GameError,
    GameInstance,
    PayoffTotalError,
    SizeGuardError,
    brute_least_core,
    brute_nucleolus,
    core_status,
    cs_core_membership,
    cs_core_witness,
    edge_path_game,
    flow_game,
    hull_membership,
    make_game,
    minimum_cuts,
    player_min_cut,
    superadditive_cover,
    vertex_path_game,
)
from .network import (
    Network,
    NetworkError,
    PathBudgetExceeded,
    enumerate_paths,
    load_network,
    max_flow,
    min_edge_cut,
    min_vertex_cut,
    orient_undirected,
    parse_network,
    shortest_path_oracle,
    split_vertices,
)
from .solutions import (
    ENUMERATE,
    GENERATE,
    CoreNonempty,
    InvariantBreach,
    LeastCoreResult,
    SlpState,
    flow_nucleolus,
    least_core,
    least_core_membership,
    nucleolus,
)

__version__ = "0.1.0"
