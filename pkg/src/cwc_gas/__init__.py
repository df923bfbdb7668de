"""Constant weight code search by simulated amplitude amplification.

The package formulates the search for a binary constant weight code as an
integer quadratic objective over a reduced combinatorial matrix, simulates
adaptive-threshold amplitude amplification exactly through its success
probability model, cross-checks the encoding with a small statevector
simulator, and benchmarks query complexity against an exhaustive baseline.
"""

from .bounds import (
    KoptResult,
    exact_max_code_size,
    k_opt,
    k_opt_upper,
    optimal_rotations,
    success_prob_L,
    success_prob_k,
    t_lower,
    t_lower_or_one,
)
from .circuit import (
    Gate,
    GateList,
    apply,
    compile_state_prep,
    grover_iterate,
    measurement_distribution,
    state_prep_gate_counts,
)
from .codes import (
    BitMatrix,
    CodeParams,
    CodeReport,
    as_mask,
    build_combinatorial_matrix,
    decode_solution,
    disjoint_support_code,
    hamming_distance,
    inner_product,
    min_distance,
    reduce_matrix,
    reduced_row_count,
    validate_code,
)
from .engine import (
    BBHT,
    CLASSICAL,
    CONVENTIONAL,
    PROPOSED,
    EngineConfig,
    GasTrace,
    aggregate_traces,
    queries_to_optimum,
    run_bbht,
    run_classical_exhaustive,
    run_classical_trials,
    run_gas,
    run_gas_trials,
    summarize_queries,
)
from .errors import (
    CoefficientOverflowError,
    DegenerateCaseError,
    ParameterError,
    ResourceLimitError,
    SearchExhaustedError,
)
from .landscape import ObjectiveLandscape, build_landscape, sample_measurement
from .qubo import (
    BoundsReport,
    QuboProblem,
    VARIANT_DOUBLE_PRIME,
    VARIANT_PRIME,
    build_objective,
    compute_bounds,
    evaluate,
    exponent_l,
    export_qubo,
    parse_qubo,
    penalty_rho,
)
from .rng import SplitMix, stream_state

__version__ = "0.1.0"

__all__ = [
    "BBHT",
    "BitMatrix",
    "BoundsReport",
    "CLASSICAL",
    "CONVENTIONAL",
    "CodeParams",
    "CodeReport",
    "CoefficientOverflowError",
    "DegenerateCaseError",
    "EngineConfig",
    "Gate",
    "GateList",
    "GasTrace",
    "KoptResult",
    "ObjectiveLandscape",
    "PROPOSED",
    "ParameterError",
    "QuboProblem",
    "ResourceLimitError",
    "SearchExhaustedError",
    "SplitMix",
    "VARIANT_DOUBLE_PRIME",
    "VARIANT_PRIME",
    "aggregate_traces",
    "apply",
    "as_mask",
    "build_combinatorial_matrix",
    "build_landscape",
    "build_objective",
    "compile_state_prep",
    "compute_bounds",
    "decode_solution",
    "disjoint_support_code",
    "evaluate",
    "exact_max_code_size",
    "exponent_l",
    "export_qubo",
    "grover_iterate",
    "hamming_distance",
    "inner_product",
    "k_opt",
    "k_opt_upper",
    "measurement_distribution",
    "min_distance",
    "optimal_rotations",
    "parse_qubo",
    "penalty_rho",
    "queries_to_optimum",
    "reduce_matrix",
    "reduced_row_count",
    "run_bbht",
    "run_classical_exhaustive",
    "run_classical_trials",
    "run_gas",
    "run_gas_trials",
    "sample_measurement",
    "state_prep_gate_counts",
    "stream_state",
    "success_prob_L",
    "success_prob_k",
    "summarize_queries",
    "t_lower",
    "t_lower_or_one",
    "validate_code",
]
