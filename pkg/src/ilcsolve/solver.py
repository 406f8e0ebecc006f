"""Iterative solving of ``G u = y`` by learning-type input updates.

The update law is ``u[k+1] = u[k] + K (y_d - G u[k])``. For a reachable
reference the outputs converge to the reference itself; otherwise they
converge to its projection onto the reachable subspace, which for an
orthogonal decomposition is the least-squares optimum. Either way the
limit input is an affine function of the starting input,

    u_inf = P u0 + c,
    P = I - K_hat inv(W) F1.T G,   c = K_hat inv(W) F1.T y_d,
    W = F1.T G K_hat,

so sweeping the starting input enumerates the entire (least-squares)
solution set; P is idempotent and its range is the null space of G.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NotConvergedError,
    SingularGramError,
)
from .gains import GainSpec, require_valid
from .linalg import DEFAULT_TOLERANCE, Tolerance, invert, rank_of
from .subspace import SubspaceDecomposition, is_trackable, project_trackable
from .validation import check_matrix, check_vector

__all__ = [
    "IlcTrace",
    "SolutionSet",
    "SOLVABLE",
    "LEAST_SQUARES",
    "iterate_once",
    "solve",
    "closed_form_limit",
    "solution_affine_map",
    "null_space_basis",
    "check_one_three_inverse",
]

SOLVABLE = "solvable"
LEAST_SQUARES = "least_squares"

TERMINATION_TOLERANCE = "tolerance_met"
TERMINATION_MAX_ITERATIONS = "max_iterations"


@dataclass
class IlcTrace:
    """Per-iteration record of a learning run.

    ``inputs[k]`` and ``outputs[k]`` are the k-th input and its output;
    ``errors[k]`` is the distance to the run's stopping target, which is
    the reference itself for solvable runs and its reachable projection
    for least-squares runs. The input update itself always uses the raw
    reference error (the two differ only in the constant unreachable
    component, which the gain annihilates). ``iterations`` counts the
    updates performed before termination.
    """

    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    termination: str = TERMINATION_MAX_ITERATIONS

    def error_history(self) -> np.ndarray:
        """Sup-norm of the recorded error at each iteration."""
        return np.array([float(np.max(np.abs(e))) if e.size else 0.0 for e in self.errors])


@dataclass(frozen=True)
class SolutionSet:
    """Classification plus a complete description of all limits.

    ``particular`` is the limit actually reached by the run. The affine
    map ``limit_matrix @ u0 + limit_offset`` gives the limit for every
    starting input, and ``particular + span(null_basis)`` is the same
    set in particular-plus-null-space form. ``residual_norm`` is the
    Euclidean distance between reference and reached output (zero for
    solvable systems).
    """

    classification: str
    particular: np.ndarray
    limit_matrix: np.ndarray
    limit_offset: np.ndarray
    null_basis: np.ndarray
    residual_norm: float


def iterate_once(G, yd, u, gain):
    """One update step: returns ``(u_next, error)``.

    ``error = yd - G u`` and ``u_next = u + gain @ error``.
    """
    g = check_matrix(G, "G")
    y = check_vector(yd, g.shape[0], "yd")
    uk = check_vector(u, g.shape[1], "u")
    k = check_matrix(gain, "gain")
    if k.shape != (g.shape[1], g.shape[0]):
        raise DimensionMismatchError(
            f"gain must be {g.shape[1]}x{g.shape[0]}, got {k.shape[0]}x{k.shape[1]}"
        )
    error = y - g @ uk
    return uk + k @ error, error


def solve(
    G,
    yd,
    spec: GainSpec,
    u0=None,
    tol: Tolerance | None = None,
    max_iter: int = 10_000,
):
    """Run the learning iteration to its limit.

    The reference is classified through the spec's decomposition: a
    reachable reference stops against the reference itself, an
    unreachable one against its reachable projection (exact convergence
    to the reference is impossible, so the projection is the honest
    target; with an orthogonal decomposition the limit input is a
    least-squares solution). Stopping compares the sup-norm of the
    target error with ``tol.conv_tol``.

    Parameters
    ----------
    G : (p, q) array_like
        System matrix.
    yd : (p,) array_like
        Reference / right-hand side.
    spec : GainSpec
        Designed gain; its certificate must be valid.
    u0 : (q,) array_like, optional
        Starting input, default zero. Different starting inputs reach
        different members of the solution set.
    tol : Tolerance, optional
        Defaults to the decomposition's tolerance.
    max_iter : int
        Update budget before NotConvergedError.

    Returns
    -------
    (SolutionSet, IlcTrace)

    Raises
    ------
    GainInvalidError
        When the spec's certificate reports a radius of one or more.
    NotConvergedError
        When the budget is exhausted; carries the partial trace.
    """
    g = check_matrix(G, "G")
    p, q = g.shape
    y = check_vector(yd, p, "yd")
    dec = spec.decomposition
    if dec.output_dim != p or spec.gain.shape != (q, p):
        raise DimensionMismatchError(
            "gain spec was designed for a system of different dimensions"
        )
    require_valid(spec)
    if max_iter < 1:
        raise ValueError("max_iter must be a positive integer")
    tol = tol or dec.tol or DEFAULT_TOLERANCE
    u = np.zeros(q) if u0 is None else check_vector(u0, q, "u0")

    if is_trackable(dec, y, tol):
        classification = SOLVABLE
        target = y
    else:
        if not dec.orthogonal:
            raise ValueError(
                "reference is unreachable and the decomposition is not "
                "orthogonal: the limit would not be a least-squares "
                "solution; rebuild with the default decomposition"
            )
        classification = LEAST_SQUARES
        target = project_trackable(dec, y)

    trace = IlcTrace()
    gain = spec.gain
    for k in range(max_iter + 1):
        output = g @ u
        trace.inputs.append(u)
        trace.outputs.append(output)
        trace.errors.append(target - output)
        if float(np.max(np.abs(target - output))) < tol.conv_tol:
            trace.iterations = k
            trace.converged = True
            trace.termination = TERMINATION_TOLERANCE
            break
        if k == max_iter:
            trace.iterations = max_iter
            trace.converged = False
            trace.termination = TERMINATION_MAX_ITERATIONS
            raise NotConvergedError(
                f"no convergence within {max_iter} iterations "
                f"(certificate radius {spec.certificate.spectral_radius:.6g})",
                trace=trace,
                classification=classification,
            )
        u = u + gain @ (y - output)

    limit_matrix, limit_offset = solution_affine_map(dec, g, spec, y)
    solution = SolutionSet(
        classification=classification,
        particular=trace.inputs[-1],
        limit_matrix=limit_matrix,
        limit_offset=limit_offset,
        null_basis=null_space_basis(g, tol),
        residual_norm=float(np.linalg.norm(g @ trace.inputs[-1] - y)),
    )
    return solution, trace


def closed_form_limit(dec: SubspaceDecomposition, G, spec: GainSpec, u0, yd) -> np.ndarray:
    """Limit input of the run from ``u0`` without iterating."""
    g = check_matrix(G, "G")
    u = check_vector(u0, g.shape[1], "u0")
    limit_matrix, limit_offset = solution_affine_map(dec, g, spec, yd)
    return limit_matrix @ u + limit_offset


def solution_affine_map(dec: SubspaceDecomposition, G, spec: GainSpec, yd):
    """Affine map ``u0 -> limit input`` as a ``(P, c)`` pair.

    ``P`` is idempotent: it fixes every solution and projects any
    starting input onto the solution set along the update directions.
    """
    g = check_matrix(G, "G")
    y = check_vector(yd, g.shape[0], "yd")
    f1t = dec.range_dual.T
    reduced = spec.reduced_gain
    w = f1t @ g @ reduced
    if rank_of(w, dec.tol) < dec.rank:
        raise SingularGramError(
            "reduced closed loop is singular; gain spec is stale for this system"
        )
    lead = reduced @ invert(w, dec.tol)
    limit_matrix = np.eye(g.shape[1]) - lead @ (f1t @ g)
    limit_offset = lead @ (f1t @ y)
    return limit_matrix, limit_offset


def null_space_basis(G, tol: Tolerance | None = None) -> np.ndarray:
    """Orthonormal basis of ``null(G)`` with the package's rank policy.

    Empty (q x 0) when the matrix has full column rank; the zero matrix
    yields a full orthonormal basis of the input space.
    """
    g = check_matrix(G, "G")
    r = rank_of(g, tol)
    vt = np.linalg.svd(g)[2]
    return vt[r:].T


def check_one_three_inverse(G, candidate, tol: Tolerance | None = None) -> bool:
    """Test the two {1,3}-inverse conditions of ``candidate`` for ``G``.

    Requires ``G M G = G`` and symmetry of ``G M``, both within a 1e-8
    relative scale. Matrices passing this test parameterize all
    least-squares solutions as ``M y + null-space terms``.
    """
    g = check_matrix(G, "G")
    m = check_matrix(candidate, "candidate")
    if m.shape != (g.shape[1], g.shape[0]):
        raise DimensionMismatchError(
            f"candidate must be {g.shape[1]}x{g.shape[0]}, got {m.shape[0]}x{m.shape[1]}"
        )
    tol = tol or DEFAULT_TOLERANCE
    rel = max(tol.rank_tol, 1e-8)
    gm = g @ m
    reproduce = float(np.max(np.abs(gm @ g - g))) <= rel * max(1.0, float(np.max(np.abs(g))))
    symmetric = float(np.max(np.abs(gm - gm.T))) <= rel * max(1.0, float(np.max(np.abs(gm))))
    return reproduce and symmetric
