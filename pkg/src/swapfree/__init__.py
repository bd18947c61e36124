"""Approximate a quadratic binary objective by a hardware-supported matrix while
choosing the qubit relabeling, so the QAOA cost layer runs without SWAP gates."""

__version__ = "0.1.0"

from .bench import (
    BRUTE_FORCE_NAME,
    CSV_COLUMNS,
    ExperimentRecord,
    NoiseModel,
    SweepConfig,
    baseline_expected_value,
    error_probability,
    estimate_swap_count,
    optimality_gap,
    run_sweep,
    top_pool_value,
)
from .bruteforce import BRUTE_FORCE_CAP, brute_force_permutations
from .graphs import (
    HardwareGraph,
    connected_graph_with_edges,
    density_edge_count,
    graph_from_text,
    graph_to_text,
    random_connected_graph,
)
from .lovasz import BoundReport, lovasz_theta, theorem1_bound
from .permutations import Permutation, apply_permutation
from .placement import (
    ALL_HEURISTICS,
    Heuristic,
    HeuristicKind,
    connected_heuristic,
    laplacian_connected,
    perron_connected,
    perron_disconnected,
    random_placements,
    run_heuristic,
)
from .qsim import (
    IsingCoefficients,
    QaoaLayerParams,
    StateVector,
    apply_cost_layer,
    apply_xy_mixer_layer,
    dicke_state,
    idealized_qaoa_solve,
    ising_coefficients,
)
from .qtensor import QTensor, qtensor_from_permutation, validate_qtensor
from .sdp import SdpCertificate, feasible_upper_bound, solve_dual_sdp, solve_fixed_p_sdp
from .similarity import (
    ProblemMatrix,
    SimilarityMatrix,
    build_problem_matrix,
    correlation_from_returns,
    laplacian_part,
    similarity_from_correlation,
    synthetic_correlation,
)
from .spectral import SpectralOrder, laplacian_order, perron_order, top_eigenpair
