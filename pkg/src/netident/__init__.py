"""Generic identifiability of edge dynamics in measured LTI networks.

Given a directed network of unknown transfer functions, full excitation, and a
subset of measured nodes, this package decides which edges are generically
identifiable (path-based graph conditions with disjoint-path / vertex-cut
certificates), searches minimal measurement sets, cross-checks every verdict
with a randomized rank oracle over the reals and a prime field, and confirms
results end to end by simulating FIR dynamics and recovering them.
"""

from .network import (
    Network,
    NetworkError,
    StructureSummary,
    can_reach,
    is_multitree,
    isolated_cycles,
    parse_network,
    serialize_network,
    sources_sinks,
    structure_summary,
    to_dot,
    unique_walk,
)
from .paths import (
    Bottleneck,
    PathCertificate,
    max_disjoint_paths,
    min_vertex_cut,
    verify_bottleneck,
    verify_path_certificate,
)
from .identify import (
    BoundChecks,
    EdgeStatus,
    EdgeVerdict,
    IdentifiabilityReport,
    NodeStatus,
    NodeVerdict,
    Shortcuts,
    bound_checks,
    check_edge,
    check_node,
    check_subset,
    full_report,
    measured_cover,
    min_measurement_set,
)
from .oracle import (
    FieldDisagreement,
    GenericInstance,
    OracleError,
    RankQuery,
    VerificationTable,
    column_rank_query,
    generic_column_identifiable,
    generic_edge_identifiable,
    generic_rank,
    lemma_disjoint_permutation,
    lemma_partition_rank_bound,
    lemma_walk_count,
    random_instance,
    verify_network,
)
from .simulate import (
    EdgeDynamics,
    EstimationError,
    PipelineResult,
    Recovery,
    ResponseEstimate,
    SimulationError,
    closed_loop_impulse,
    estimate_CT,
    frequency_grid,
    recover_G,
    run_pipeline,
    simulate,
    synth_dynamics,
    white_excitation,
)

__version__ = "0.1.0"

__all__ = [
    "Network",
    "NetworkError",
    "StructureSummary",
    "can_reach",
    "is_multitree",
    "isolated_cycles",
    "parse_network",
    "serialize_network",
    "sources_sinks",
    "structure_summary",
    "to_dot",
    "unique_walk",
    "Bottleneck",
    "PathCertificate",
    "max_disjoint_paths",
    "min_vertex_cut",
    "verify_bottleneck",
    "verify_path_certificate",
    "BoundChecks",
    "EdgeStatus",
    "EdgeVerdict",
    "IdentifiabilityReport",
    "NodeStatus",
    "NodeVerdict",
    "Shortcuts",
    "bound_checks",
    "check_edge",
    "check_node",
    "check_subset",
    "full_report",
    "measured_cover",
    "min_measurement_set",
    "FieldDisagreement",
    "GenericInstance",
    "OracleError",
    "RankQuery",
    "VerificationTable",
    "column_rank_query",
    "generic_column_identifiable",
    "generic_edge_identifiable",
    "generic_rank",
    "lemma_disjoint_permutation",
    "lemma_partition_rank_bound",
    "lemma_walk_count",
    "random_instance",
    "verify_network",
    "EdgeDynamics",
    "EstimationError",
    "PipelineResult",
    "Recovery",
    "ResponseEstimate",
    "SimulationError",
    "closed_loop_impulse",
    "estimate_CT",
    "frequency_grid",
    "recover_G",
    "run_pipeline",
    "simulate",
    "synth_dynamics",
    "white_excitation",
    "__version__",
]
