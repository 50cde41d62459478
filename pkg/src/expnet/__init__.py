"""Exact two-point interpolation with matrix-exponential networks.

The core result: a three-layer network f(X) = W3 expm(W2 expm(W1 X))
whose activation is the matrix exponential can fit two data/label pairs
of invertible matrices in closed form, no training required. The package
provides the construction (:mod:`expnet.solver`), its exp/log kernels
(:mod:`expnet.matfuncs`), and a gradient-descent experiment showing that
entry-wise activations lack this power (:mod:`expnet.experiment`).
"""

from .errors import (
    ActivationSingularError,
    ComplexInputError,
    ConvergenceError,
    DimensionError,
    ExpnetError,
    IllConditionedError,
    InstanceRejectedError,
    MaxResampleError,
    NearSingularError,
    SingularInputError,
)
from .experiment import (
    ACTIVATIONS,
    IDENTITY,
    RELU,
    SIGMOID,
    Activation,
    ExperimentConfig,
    ExperimentTrace,
    SeedRun,
    apply_activation,
    baseline_denominator,
    run_experiment,
    two_layer_gradient,
    two_layer_gradient_fd,
    two_layer_objective,
    two_layer_s_score,
    write_trace_csv,
)
from .linalg import (
    CMatrix,
    LuFactors,
    SchurForm,
    cmatrix,
    inverse,
    load_matrix,
    lu_factor,
    lu_solve,
    matmul,
    matrix_from_json,
    matrix_to_json,
    random_matrix,
    save_matrix,
    schur_decompose,
)
from .matfuncs import (
    PRINCIPAL,
    BranchSpec,
    check_commuting_product,
    expm,
    jordan_block_log,
    logm,
)
from .solver import (
    ADMISSION_RCOND,
    DEFAULT_ALPHA,
    DEFAULT_TOLERANCE,
    ProblemInstance,
    SolveReport,
    ThreeLayerWeights,
    compute_z,
    eval_three_layer,
    load_instance,
    load_weights,
    make_instance,
    random_instance,
    save_instance,
    save_weights,
    solve_block_diagonal,
    solve_single_layer,
    solve_three_layer,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVATIONS",
    "ADMISSION_RCOND",
    "Activation",
    "ActivationSingularError",
    "BranchSpec",
    "CMatrix",
    "ComplexInputError",
    "ConvergenceError",
    "DEFAULT_ALPHA",
    "DEFAULT_TOLERANCE",
    "DimensionError",
    "ExperimentConfig",
    "ExperimentTrace",
    "ExpnetError",
    "IDENTITY",
    "IllConditionedError",
    "InstanceRejectedError",
    "LuFactors",
    "MaxResampleError",
    "NearSingularError",
    "PRINCIPAL",
    "ProblemInstance",
    "RELU",
    "SIGMOID",
    "SchurForm",
    "SeedRun",
    "SingularInputError",
    "SolveReport",
    "ThreeLayerWeights",
    "apply_activation",
    "baseline_denominator",
    "check_commuting_product",
    "cmatrix",
    "compute_z",
    "eval_three_layer",
    "expm",
    "inverse",
    "jordan_block_log",
    "load_instance",
    "load_matrix",
    "load_weights",
    "logm",
    "lu_factor",
    "lu_solve",
    "make_instance",
    "matmul",
    "matrix_from_json",
    "matrix_to_json",
    "random_instance",
    "random_matrix",
    "run_experiment",
    "save_instance",
    "save_matrix",
    "save_weights",
    "schur_decompose",
    "solve_block_diagonal",
    "solve_single_layer",
    "solve_three_layer",
    "two_layer_gradient",
    "two_layer_gradient_fd",
    "two_layer_objective",
    "two_layer_s_score",
    "verify",
    "write_trace_csv",
]
