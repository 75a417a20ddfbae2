"""seedpol: ternary majority-rule opinion dynamics on complex networks.

Simulates the spread of two conflicting opinions from either a pair of
opposed seed nodes (SIC) or a fully random assignment (RIC), quantifies the
resulting polarization, classifies steady-state stability through a
smoothed-map Jacobian, and predicts where a network splits from per-edge
asymptotic differences.
"""

from .dynamics import (
    Convergence,
    SteadyStateResult,
    evolve_to_steady,
    init_ric,
    init_sic,
    step,
)
from .experiments import (
    ConfigModelSpec,
    DegreeCorrectedSpec,
    EnsembleRecord,
    ExperimentConfig,
    FixedGraph,
    HeatmapCell,
    SplitResult,
    SweepRow,
    all_pairs_sic,
    config_digest,
    heatmap,
    realize_graph,
    run_ensemble,
    size_sweep,
    split_prediction,
)
from .generators import (
    DegreeSequence,
    PlantedPartitionSpec,
    configuration_model,
    degree_corrected_planted_partition,
    planted_partition_poisson,
    sample_power_law_degrees,
)
from .graph import (
    EdgeListParseError,
    Graph,
    connected_components,
    from_pairs,
    load_edge_list,
    remove_edges,
    write_edge_list,
)
from .metrics import (
    EdgeDifferenceTable,
    PolarizationSample,
    edge_differences,
    fd_bin_count,
    fd_histogram,
    pearson_correlation,
    polarization_index,
)
from .rng import RngSeed
from .stability import (
    SmoothedState,
    StabilityReport,
    Verdict,
    classify_stability,
    jacobian,
    relax_to_fixed_point,
    smoothed_step,
    spectral_radius,
)

__version__ = "0.1.0"

__all__ = [
    "Convergence",
    "SteadyStateResult",
    "evolve_to_steady",
    "init_ric",
    "init_sic",
    "step",
    "ConfigModelSpec",
    "DegreeCorrectedSpec",
    "EnsembleRecord",
    "ExperimentConfig",
    "FixedGraph",
    "HeatmapCell",
    "SplitResult",
    "SweepRow",
    "all_pairs_sic",
    "config_digest",
    "heatmap",
    "realize_graph",
    "run_ensemble",
    "size_sweep",
    "split_prediction",
    "DegreeSequence",
    "PlantedPartitionSpec",
    "configuration_model",
    "degree_corrected_planted_partition",
    "planted_partition_poisson",
    "sample_power_law_degrees",
    "EdgeListParseError",
    "Graph",
    "connected_components",
    "from_pairs",
    "load_edge_list",
    "remove_edges",
    "write_edge_list",
    "EdgeDifferenceTable",
    "PolarizationSample",
    "edge_differences",
    "fd_bin_count",
    "fd_histogram",
    "pearson_correlation",
    "polarization_index",
    "RngSeed",
    "SmoothedState",
    "StabilityReport",
    "Verdict",
    "classify_stability",
    "jacobian",
    "relax_to_fixed_point",
    "smoothed_step",
    "spectral_radius",
    "__version__",
]
