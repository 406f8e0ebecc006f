"""ilcsolve: linear-equation solving by learning-type iterations.

Solves ``G u = y`` including rank-deficient and inconsistent systems,
classifies references through a column-space/complement decomposition,
designs update gains with exponential or finite-step (deadbeat)
convergence certificates, describes the full (least-squares) solution
set as an affine family, and lifts finite-horizon state-space tracking
problems onto the same machinery.
"""

from .estimator import IlcSolver
from .exceptions import (
    DimensionMismatchError,
    GainInvalidError,
    IlcsolveError,
    NonSquareError,
    NoUniformRelativeDegreeError,
    NotConvergedError,
    NotNilpotentError,
    ParseError,
    SingularGramError,
    SingularMatrixError,
    WrongSampleCountError,
    ZeroMatrixError,
)
from .gains import (
    GainCertificate,
    GainSpec,
    contract_gain,
    custom_gain,
    design_deadbeat,
    design_exponential,
    expand_gain,
    verify_gain,
)
from .lifted import (
    LiftedSystem,
    StateSpaceSystem,
    build_lifted,
    lift_reference,
    relative_degree,
    run_tracking,
    shift_reference,
    simulate,
)
from .linalg import (
    DEFAULT_TOLERANCE,
    Tolerance,
    invert,
    nilpotency_index,
    rank_of,
    spectral_radius,
)
from .oracle import OracleVerdict, least_squares_oracle, solvability_oracle
from .solver import (
    LEAST_SQUARES,
    SOLVABLE,
    IlcTrace,
    SolutionSet,
    check_one_three_inverse,
    closed_form_limit,
    iterate_once,
    null_space_basis,
    solution_affine_map,
    solve,
)
from .subspace import (
    SubspaceDecomposition,
    SystemClassification,
    build_decomposition,
    classify_system,
    decomposition_from_bases,
    is_trackable,
    project_trackable,
    uncontrollable_component,
)

__version__ = "0.1.0"

__all__ = [
    "IlcSolver",
    "IlcsolveError",
    "DimensionMismatchError",
    "NonSquareError",
    "SingularMatrixError",
    "SingularGramError",
    "ZeroMatrixError",
    "NotNilpotentError",
    "GainInvalidError",
    "NotConvergedError",
    "NoUniformRelativeDegreeError",
    "WrongSampleCountError",
    "ParseError",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "rank_of",
    "invert",
    "spectral_radius",
    "nilpotency_index",
    "SubspaceDecomposition",
    "SystemClassification",
    "build_decomposition",
    "decomposition_from_bases",
    "is_trackable",
    "classify_system",
    "uncontrollable_component",
    "project_trackable",
    "GainCertificate",
    "GainSpec",
    "design_exponential",
    "design_deadbeat",
    "custom_gain",
    "expand_gain",
    "contract_gain",
    "verify_gain",
    "IlcTrace",
    "SolutionSet",
    "SOLVABLE",
    "LEAST_SQUARES",
    "solve",
    "iterate_once",
    "closed_form_limit",
    "solution_affine_map",
    "null_space_basis",
    "check_one_three_inverse",
    "StateSpaceSystem",
    "LiftedSystem",
    "relative_degree",
    "build_lifted",
    "lift_reference",
    "shift_reference",
    "simulate",
    "run_tracking",
    "OracleVerdict",
    "solvability_oracle",
    "least_squares_oracle",
    "__version__",
]
