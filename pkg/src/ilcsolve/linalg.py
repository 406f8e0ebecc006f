"""Dense-matrix numeric primitives shared by every other module.

Rank decisions use column-pivoted QR with a relative threshold, matrix
inversion is guarded by that same rank test, the spectral radius comes
from LAPACK's QR eigenvalue iteration (valid for non-symmetric input),
and nilpotency is decided by explicit matrix powering rather than by
eigenvalue proximity to zero, because finite-step convergence is a
statement about exact powers and powering is robust at the scales this
package targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import SingularMatrixError
from .validation import check_matrix

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "rank_of",
    "invert",
    "spectral_radius",
    "nilpotency_index",
]

# Powering is abandoned once entries exceed this magnitude; a matrix
# whose powers grow this large is treated as non-nilpotent.
_POWER_GROWTH_LIMIT = 1e150


@dataclass(frozen=True)
class Tolerance:
    """Numeric thresholds used throughout the package.

    Parameters
    ----------
    rank_tol : float
        Relative threshold for rank decisions: a pivot (or residual)
        counts as nonzero when it exceeds ``rank_tol`` times the largest
        column norm of the matrix under test. Must be non-negative.
    conv_tol : float
        Absolute stopping tolerance for iterative runs, applied to the
        sup-norm of the remaining error. Must be positive.
    """

    rank_tol: float = 1e-10
    conv_tol: float = 1e-10

    def __post_init__(self):
        if self.rank_tol < 0:
            raise ValueError("rank_tol must be non-negative")
        if self.conv_tol <= 0:
            raise ValueError("conv_tol must be positive")


DEFAULT_TOLERANCE = Tolerance()


def rank_of(matrix, tol: Tolerance | None = None) -> int:
    """Numeric rank via column-pivoted QR.

    Counts the diagonal entries of the pivoted R factor that exceed
    ``rank_tol`` times the largest Euclidean column norm. The zero
    matrix has rank 0; the result never exceeds ``min(rows, cols)``.

    Parameters
    ----------
    matrix : array_like
        Real matrix of any shape.
    tol : Tolerance, optional
        Thresholds; defaults to ``DEFAULT_TOLERANCE``.
    """
    m = check_matrix(matrix)
    tol = tol or DEFAULT_TOLERANCE
    if m.size == 0:
        return 0
    col_scale = float(np.max(np.linalg.norm(m, axis=0)))
    if col_scale == 0.0:
        return 0
    r = scipy.linalg.qr(m, mode="r", pivoting=True)[0]
    pivots = np.abs(np.diag(r))
    return int(np.count_nonzero(pivots > tol.rank_tol * col_scale))


def invert(matrix, tol: Tolerance | None = None) -> np.ndarray:
    """Inverse of a square, numerically nonsingular matrix.

    Raises
    ------
    SingularMatrixError
        When the numeric rank at ``tol`` is below the dimension.
    NonSquareError
        When the input is not square.
    """
    m = check_matrix(matrix, square=True)
    n = m.shape[0]
    if rank_of(m, tol) < n:
        raise SingularMatrixError(
            f"matrix of shape {n}x{n} is singular at the rank tolerance"
        )
    return np.linalg.inv(m)


def spectral_radius(matrix, tol: Tolerance | None = None) -> float:
    """Largest eigenvalue magnitude of a square matrix.

    Exact 0.0 is reported whenever :func:`nilpotency_index` succeeds
    first: the eigenvalues of a defective near-nilpotent matrix are so
    ill-conditioned that the QR iteration can return spurious magnitudes
    of order ``eps**(1/n)``, while powering detects the nilpotent
    structure reliably. Otherwise the value comes from LAPACK's
    implicitly shifted QR iteration (``numpy.linalg.eigvals``), which
    handles non-symmetric input and converges to machine precision.
    """
    m = check_matrix(matrix, square=True)
    if m.shape[0] == 0:
        return 0.0
    if nilpotency_index(m, tol=tol) is not None:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def nilpotency_index(
    matrix,
    max_power: int | None = None,
    tol: Tolerance | None = None,
) -> int | None:
    """Minimal ``nu`` with ``matrix**nu == 0``, or None.

    A power counts as zero when every entry is below ``rank_tol`` times
    ``max(1, inf-norm of matrix)``. The default power budget is the
    matrix dimension, which suffices by Cayley-Hamilton. Returns None
    when no power within the budget vanishes (including when powers grow
    without bound, which rules nilpotency out).

    The zero matrix has index 1; the identity has none.
    """
    m = check_matrix(matrix, square=True)
    tol = tol or DEFAULT_TOLERANCE
    n = m.shape[0]
    if n == 0:
        return 1
    if max_power is None:
        max_power = n
    if max_power < 1:
        raise ValueError("max_power must be at least 1")
    threshold = tol.rank_tol * max(1.0, float(np.max(np.abs(m))))
    power = m
    for nu in range(1, max_power + 1):
        largest = float(np.max(np.abs(power)))
        if largest <= threshold:
            return nu
        if not np.isfinite(largest) or largest > _POWER_GROWTH_LIMIT:
            return None
        power = power @ m
    return None
