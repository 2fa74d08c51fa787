"""Exact perimeter minimization on weighted graphs, for building BV-extension sets."""
from .extension import ExtensionReport, check_step3, non_extension_witness, sample_probes, zero_extension_norm_ratio
from .functional import (
    PreconditionError,
    bv_norm,
    coarea_integral,
    coarea_profile,
    essential_perimeter,
    perimeter,
    relative_perimeter,
    total_variation,
)
from .mincut import INF, FlowNetwork, InfeasibleCutError, InvariantError, solve
from .minimize import (
    MinimizerResult,
    Problem,
    ResolutionExhaustedError,
    Variant,
    best_extension,
    estimate_lambda,
    evaluate,
    minimize,
)
from .space import CapacityScaleError, GridSpec, Space, add_atom, add_edges, build_grid, build_path, glue, graph_distance

__version__ = "0.1.0"

__all__ = [
    "CapacityScaleError", "ExtensionReport", "FlowNetwork", "GridSpec", "INF", "InfeasibleCutError",
    "InvariantError", "MinimizerResult", "PreconditionError", "Problem", "ResolutionExhaustedError", "Space",
    "Variant", "add_atom", "add_edges", "best_extension", "build_grid", "build_path", "bv_norm", "check_step3",
    "coarea_integral", "coarea_profile", "essential_perimeter", "estimate_lambda", "evaluate", "glue",
    "graph_distance", "minimize", "non_extension_witness", "perimeter", "relative_perimeter", "sample_probes",
    "solve", "total_variation", "zero_extension_norm_ratio",
]
