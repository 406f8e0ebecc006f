"""Independent ground-truth answers for cross-checking the solver path.

Solvability is decided by the classical augmented-rank test, and the
minimum-norm least-squares solution comes from LAPACK's SVD-based
``lstsq`` driver. Neither touches the decomposition or gain machinery;
that independence is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOLERANCE, Tolerance, rank_of
from .validation import check_matrix, check_vector

__all__ = ["OracleVerdict", "solvability_oracle", "least_squares_oracle"]


@dataclass(frozen=True)
class OracleVerdict:
    solvable: bool
    min_norm_solution: np.ndarray
    residual_norm: float


def solvability_oracle(G, yd, tol: Tolerance | None = None) -> bool:
    """True when appending the reference as a column leaves the rank unchanged."""
    g = check_matrix(G, "G")
    y = check_vector(yd, g.shape[0], "yd")
    return rank_of(np.hstack([g, y[:, None]]), tol) == rank_of(g, tol)


def least_squares_oracle(G, yd, tol: Tolerance | None = None) -> OracleVerdict:
    """Minimum-norm least-squares solution and its residual."""
    g = check_matrix(G, "G")
    y = check_vector(yd, g.shape[0], "yd")
    tol = tol or DEFAULT_TOLERANCE
    solution = np.linalg.lstsq(g, y, rcond=max(tol.rank_tol, 1e-15))[0]
    return OracleVerdict(
        solvable=solvability_oracle(g, y, tol),
        min_norm_solution=solution,
        residual_norm=float(np.linalg.norm(g @ solution - y)),
    )
