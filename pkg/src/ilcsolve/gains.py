"""Learning-gain construction and convergence certificates.

All gains are designed in reduced q x m form and expanded to the full
q x p update gain by right-multiplying with the range dual transpose;
the reduction loses no generality and shrinks the design space. The
reduced candidates take the shape

    K_hat = G.T @ F1 @ inv(F1.T @ G @ G.T @ F1) @ (I - S)

where S is the target closed-loop matrix on the reachable coordinates:
any contraction (``alpha * I`` here) yields geometric convergence with
ratio exactly ``alpha``, and any nilpotent S forces convergence in at
most m steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    DimensionMismatchError,
    GainInvalidError,
    NotNilpotentError,
    SingularGramError,
)
from .linalg import Tolerance, invert, nilpotency_index, rank_of
from .subspace import SubspaceDecomposition
from .validation import check_matrix

__all__ = [
    "GainCertificate",
    "GainSpec",
    "design_exponential",
    "design_deadbeat",
    "custom_gain",
    "expand_gain",
    "contract_gain",
    "verify_gain",
]

MODE_EXPONENTIAL = "exponential"
MODE_DEADBEAT = "deadbeat"
MODE_CUSTOM = "custom"


@dataclass(frozen=True)
class GainCertificate:
    """Convergence certificate of a gain on a given system.

    ``spectral_radius`` is the radius of the closed-loop matrix on the
    reachable coordinates; ``deadbeat_index`` is its nilpotency index
    when that matrix is nilpotent (finite-step convergence in exactly
    that many iterations), else None. ``valid`` means the radius is
    below one.
    """

    spectral_radius: float
    deadbeat_index: int | None
    valid: bool


@dataclass(frozen=True)
class GainSpec:
    """A designed learning gain bound to its decomposition.

    ``gain`` always equals ``reduced_gain @ range_dual.T``, so the full
    update annihilates the unreachable error component and the
    certificate on the reduced closed loop governs the whole run.
    """

    mode: str
    reduced_gain: np.ndarray
    gain: np.ndarray
    certificate: GainCertificate
    decomposition: SubspaceDecomposition


def _closed_loop(dec: SubspaceDecomposition, g: np.ndarray, reduced_gain: np.ndarray) -> np.ndarray:
    return np.eye(dec.rank) - dec.range_dual.T @ g @ reduced_gain


def _certify(closed: np.ndarray, tol: Tolerance) -> GainCertificate:
    nu = nilpotency_index(closed, tol=tol)
    if nu is not None:
        rho = 0.0
    else:
        rho = float(np.max(np.abs(np.linalg.eigvals(closed)))) if closed.size else 0.0
    return GainCertificate(spectral_radius=rho, deadbeat_index=nu, valid=rho < 1.0)


def _assert_row_rank(dec: SubspaceDecomposition, g: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Reduced system matrix, after checking it has full row rank.

    The rank threshold is taken relative to the scales of the factors,
    not of the product itself: a stale decomposition can reduce the
    product to pure round-off dust, which must read as rank zero.
    """
    reduced = dec.range_dual.T @ g
    scale = float(np.max(np.linalg.norm(g, axis=0), initial=0.0)) * float(
        np.max(np.linalg.norm(dec.range_dual, axis=0), initial=0.0)
    )
    pivots = np.abs(np.diag(scipy.linalg.qr(reduced, mode="r", pivoting=True)[0]))
    rank = int(np.count_nonzero(pivots > tol.rank_tol * scale)) if scale > 0 else 0
    if rank < dec.rank:
        raise SingularGramError(
            "reduced system lost row rank; decomposition is stale for this matrix"
        )
    return reduced


def _reduced_candidate(
    dec: SubspaceDecomposition,
    g: np.ndarray,
    shape_matrix: np.ndarray,
    tol: Tolerance,
) -> np.ndarray:
    """Reduced gain placing the closed loop at ``shape_matrix``."""
    m = dec.rank
    reduced = _assert_row_rank(dec, g, tol)
    gram = reduced @ reduced.T
    if rank_of(gram, tol) < m:
        raise SingularGramError("gain Gram matrix is singular")
    return reduced.T @ invert(gram, tol) @ (np.eye(m) - shape_matrix)


def design_exponential(
    dec: SubspaceDecomposition,
    G,
    alpha: float,
    tol: Tolerance | None = None,
) -> GainSpec:
    """Gain contracting the reachable error by ``alpha`` per iteration.

    Requires ``0 <= alpha < 1``. By construction the closed loop on the
    reachable coordinates equals ``alpha * I`` exactly, so the recorded
    spectral radius is ``alpha`` up to round-off.
    """
    g = check_matrix(G, "G")
    tol = tol or dec.tol
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    shape = alpha * np.eye(dec.rank)
    reduced = _reduced_candidate(dec, g, shape, tol)
    cert = _certify(_closed_loop(dec, g, reduced), tol)
    return GainSpec(
        mode=MODE_EXPONENTIAL,
        reduced_gain=reduced,
        gain=expand_gain(reduced, dec),
        certificate=cert,
        decomposition=dec,
    )


def design_deadbeat(
    dec: SubspaceDecomposition,
    G,
    nilpotent_seed=None,
    tol: Tolerance | None = None,
) -> GainSpec:
    """Gain forcing exact convergence within at most ``rank`` iterations.

    ``nilpotent_seed`` becomes the closed-loop matrix on the reachable
    coordinates and must be m x m nilpotent; the default is the
    superdiagonal shift, whose nilpotency index is exactly m. For m = 1
    the only nilpotent choice is the zero matrix.

    Raises
    ------
    NotNilpotentError
        When the supplied seed fails the explicit powering check.
    """
    g = check_matrix(G, "G")
    tol = tol or dec.tol
    m = dec.rank
    if nilpotent_seed is None:
        seed = np.eye(m, k=1)
    else:
        seed = check_matrix(nilpotent_seed, "nilpotent_seed", square=True)
        if seed.shape[0] != m:
            raise DimensionMismatchError(
                f"nilpotent_seed must be {m}x{m}, got {seed.shape[0]}x{seed.shape[1]}"
            )
        if nilpotency_index(seed, tol=tol) is None:
            raise NotNilpotentError("supplied seed matrix is not nilpotent")
    reduced = _reduced_candidate(dec, g, seed, tol)
    cert = _certify(_closed_loop(dec, g, reduced), tol)
    return GainSpec(
        mode=MODE_DEADBEAT,
        reduced_gain=reduced,
        gain=expand_gain(reduced, dec),
        certificate=cert,
        decomposition=dec,
    )


def custom_gain(
    dec: SubspaceDecomposition,
    G,
    reduced_gain,
    tol: Tolerance | None = None,
) -> GainSpec:
    """Wrap a user-supplied reduced gain with its certificate.

    No validity is enforced here; solvers reject specs whose
    certificate reports a radius of one or more.
    """
    g = check_matrix(G, "G")
    tol = tol or dec.tol
    reduced = check_matrix(reduced_gain, "reduced_gain")
    if reduced.shape != (g.shape[1], dec.rank):
        raise DimensionMismatchError(
            f"reduced_gain must be {g.shape[1]}x{dec.rank}, "
            f"got {reduced.shape[0]}x{reduced.shape[1]}"
        )
    cert = _certify(_closed_loop(dec, g, reduced), tol)
    return GainSpec(
        mode=MODE_CUSTOM,
        reduced_gain=reduced,
        gain=expand_gain(reduced, dec),
        certificate=cert,
        decomposition=dec,
    )


def expand_gain(reduced_gain, dec: SubspaceDecomposition) -> np.ndarray:
    """Full q x p update gain from a reduced q x m one."""
    reduced = check_matrix(reduced_gain, "reduced_gain")
    if reduced.shape[1] != dec.rank:
        raise DimensionMismatchError(
            f"reduced gain has {reduced.shape[1]} columns, expected {dec.rank}"
        )
    return reduced @ dec.range_dual.T


def contract_gain(gain, dec: SubspaceDecomposition) -> np.ndarray:
    """Reduced q x m gain from a full q x p one (right-multiply by H1).

    Inverse of :func:`expand_gain` on its image, since the dual is a
    left inverse of the range basis.
    """
    full = check_matrix(gain, "gain")
    if full.shape[1] != dec.output_dim:
        raise DimensionMismatchError(
            f"gain has {full.shape[1]} columns, expected {dec.output_dim}"
        )
    return full @ dec.range_basis


def verify_gain(
    dec: SubspaceDecomposition,
    G,
    spec: GainSpec,
    tol: Tolerance | None = None,
) -> GainCertificate:
    """Recompute the certificate of a spec against a system matrix.

    Invalid gains are reported, not raised.
    """
    g = check_matrix(G, "G")
    tol = tol or dec.tol
    reduced = spec.reduced_gain
    if reduced.shape != (g.shape[1], dec.rank):
        raise DimensionMismatchError(
            "gain spec dimensions do not match the system and decomposition"
        )
    return _certify(_closed_loop(dec, g, reduced), tol)


def require_valid(spec: GainSpec) -> None:
    """Raise GainInvalidError unless the spec's certificate is valid."""
    if not spec.certificate.valid:
        raise GainInvalidError(
            "gain certificate reports spectral radius "
            f"{spec.certificate.spectral_radius:.6g} >= 1; run refused"
        )
