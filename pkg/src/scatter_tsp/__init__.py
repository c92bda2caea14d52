"""Maximum Scatter TSP: a (1 - eps) approximation scheme with exact subroutines."""

from .instance import (
    ContractViolation,
    Instance,
    candidate_distances,
    distance,
    generate,
    meets_threshold,
    read_instance,
    scatter,
    threshold_tolerance,
    tour_edge_lengths,
    validate_tour,
    write_instance,
)
from .graphs import (
    MetricThresholdView,
    Multigraph,
    ThresholdGraph,
    bc_lift,
    bipartite_max_matching,
    bondy_chvatal_closure,
    dirac_hamiltonian,
    eulerian_tour,
    normalize_tour,
    threshold_graph,
)
from .nets import Net, greedy_delta_net, grid_round
from .many_visits import Multiwalk, VisitSpec, many_visits_tour, solve_degree_system
from .eptas import (
    DecisionOutcome,
    DecisionParams,
    decide_scatter,
    find_low_degree_point,
    low_degree_context,
    maximize_scatter,
    maximize_scatter_report,
)
from .oracle import OracleResult, brute_force_mstsp, is_hamiltonian
from .hardness import (
    CodeBook,
    CubicBipartiteGraph,
    GapReport,
    Labeling,
    edge_color_cubic_bipartite,
    embed,
    gap_check,
    read_cubic_graph,
    reed_muller,
    write_cubic_graph,
)

__all__ = [
    "ContractViolation",
    "Instance",
    "candidate_distances",
    "distance",
    "generate",
    "meets_threshold",
    "read_instance",
    "scatter",
    "threshold_tolerance",
    "tour_edge_lengths",
    "validate_tour",
    "write_instance",
    "MetricThresholdView",
    "Multigraph",
    "ThresholdGraph",
    "bc_lift",
    "bipartite_max_matching",
    "bondy_chvatal_closure",
    "dirac_hamiltonian",
    "eulerian_tour",
    "normalize_tour",
    "threshold_graph",
    "Net",
    "greedy_delta_net",
    "grid_round",
    "Multiwalk",
    "VisitSpec",
    "many_visits_tour",
    "solve_degree_system",
    "DecisionOutcome",
    "DecisionParams",
    "decide_scatter",
    "find_low_degree_point",
    "low_degree_context",
    "maximize_scatter",
    "maximize_scatter_report",
    "OracleResult",
    "brute_force_mstsp",
    "is_hamiltonian",
    "CodeBook",
    "CubicBipartiteGraph",
    "GapReport",
    "Labeling",
    "edge_color_cubic_bipartite",
    "embed",
    "gap_check",
    "read_cubic_graph",
    "reed_muller",
    "write_cubic_graph",
]
