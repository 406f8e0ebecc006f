"""Range/complement splitting of the output space and reference tests.

A decomposition pairs a basis of the system matrix's column space with a
basis of a complement, plus the dual (left-inverse) blocks of both.
Writing ``H = [H1 H2]`` and ``F = inv(H)`` split into ``F1``/``F2``
rows, the blocks satisfy ``F1.T @ H1 = I``, ``F2.T @ H2 = I``, the cross
products vanish, ``H1 @ F1.T + H2 @ F2.T = I``, and ``F2.T @ G = 0``.
``F2.T @ e`` isolates the error component no input update can move,
which is what classifies a reference as reachable or not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatchError, ZeroMatrixError
from .linalg import DEFAULT_TOLERANCE, Tolerance, invert, rank_of
from .validation import check_matrix, check_vector

__all__ = [
    "SubspaceDecomposition",
    "SystemClassification",
    "build_decomposition",
    "decomposition_from_bases",
    "is_trackable",
    "classify_system",
    "uncontrollable_component",
    "project_trackable",
]


@dataclass(frozen=True)
class SubspaceDecomposition:
    """Column-space/complement split of a p x q system matrix.

    Attributes
    ----------
    range_basis : (p, m) ndarray
        Basis of the column space (H1).
    range_dual : (p, m) ndarray
        Dual block F1 with ``range_dual.T @ range_basis = I``.
    complement_basis : (p, p - m) ndarray
        Basis of the chosen complement (H2); zero columns when m = p.
    complement_dual : (p, p - m) ndarray
        Dual block F2; equals ``complement_basis`` when that basis is
        orthonormal.
    rank : int
        m, the rank of the system matrix.
    orthogonal : bool
        True when ``range_basis.T @ complement_basis = 0`` by
        construction; required for least-squares optimality of limits.
    tol : Tolerance
        Thresholds the decomposition was built with.
    """

    range_basis: np.ndarray
    range_dual: np.ndarray
    complement_basis: np.ndarray
    complement_dual: np.ndarray
    rank: int
    orthogonal: bool
    tol: Tolerance

    @property
    def output_dim(self) -> int:
        return self.range_basis.shape[0]


@dataclass(frozen=True)
class SystemClassification:
    """Rank-derived reachability flags for a p x q system matrix.

    ``trackability_property`` holds when every reference is reachable
    (rank = p). ``realizability_property`` additionally demands a unique
    generating input (square invertible matrix). When the rank falls
    short of the column count, only the zero reference has a unique
    generating input, flagged by ``realizable_subspace_trivial``.
    """

    rank: int
    trackability_property: bool
    realizability_property: bool
    realizable_subspace_trivial: bool


def _leftmost_independent_columns(g: np.ndarray, rank_tol: float) -> list[int]:
    """Indices of the leftmost maximal independent column set.

    Greedy Gram-Schmidt sweep with one reorthogonalization pass; a
    column joins the set when its residual against the span of the
    already-selected columns exceeds ``rank_tol`` times the largest
    column norm of ``g``.
    """
    p, q = g.shape
    scale = float(np.max(np.linalg.norm(g, axis=0)))
    threshold = rank_tol * scale
    basis = np.empty((p, 0))
    selected: list[int] = []
    for j in range(q):
        w = g[:, j]
        w = w - basis @ (basis.T @ w)
        w = w - basis @ (basis.T @ w)
        norm = float(np.linalg.norm(w))
        if norm > threshold:
            selected.append(j)
            basis = np.hstack([basis, (w / norm)[:, None]])
            if len(selected) == p:
                break
    return selected


def build_decomposition(G, tol: Tolerance | None = None) -> SubspaceDecomposition:
    """Default decomposition: pivot columns of G plus an orthonormal complement.

    The range basis keeps the leftmost independent columns of ``G``
    itself (not an orthonormalized version), its dual is
    ``H1 @ inv(H1.T @ H1)``, and the complement basis is an orthonormal
    basis of the orthogonal complement, so the complement dual equals
    the complement basis and the split is orthogonal.

    Raises
    ------
    ZeroMatrixError
        When ``G`` has rank 0. A zero system is completely
        uncontrollable: no nonzero reference can be reached, so there is
        nothing to decompose.
    """
    g = check_matrix(G, "G")
    tol = tol or DEFAULT_TOLERANCE
    if g.size == 0 or not np.any(g):
        raise ZeroMatrixError(
            "system matrix is zero: completely uncontrollable, "
            "no nonzero reference is trackable"
        )
    selected = _leftmost_independent_columns(g, tol.rank_tol)
    h1 = g[:, selected]
    # equals h1 @ inv(h1.T @ h1) but avoids squaring the conditioning
    f1 = np.linalg.pinv(h1).T
    h2 = scipy.linalg.null_space(h1.T)
    return SubspaceDecomposition(
        range_basis=h1,
        range_dual=f1,
        complement_basis=h2,
        complement_dual=h2,
        rank=len(selected),
        orthogonal=True,
        tol=tol,
    )


def decomposition_from_bases(
    G,
    range_basis,
    complement_basis,
    tol: Tolerance | None = None,
) -> SubspaceDecomposition:
    """Decomposition from user-supplied bases.

    ``[range_basis complement_basis]`` must be square and nonsingular,
    and the range basis must span the column space of ``G`` (checked via
    ``F2.T @ G = 0``). The duals are read off the inverse of the stacked
    basis matrix. The orthogonality flag records whether
    ``range_basis.T @ complement_basis`` vanishes; only then do
    least-squares limit guarantees apply.
    """
    g = check_matrix(G, "G")
    h1 = check_matrix(range_basis, "range_basis")
    h2 = check_matrix(complement_basis, "complement_basis")
    tol = tol or DEFAULT_TOLERANCE
    p = g.shape[0]
    if h1.shape[0] != p or h2.shape[0] != p:
        raise DimensionMismatchError(
            "basis rows must match the system matrix's row count"
        )
    m = h1.shape[1]
    if m + h2.shape[1] != p:
        raise DimensionMismatchError(
            f"basis columns must total {p}, got {m} + {h2.shape[1]}"
        )
    stacked = np.hstack([h1, h2])
    f = invert(stacked, tol)
    f1 = f[:m].T
    f2 = f[m:].T
    if f2.size:
        annihilation = float(np.max(np.abs(f2.T @ g)))
        scale = max(1.0, float(np.max(np.abs(f2)))) * max(1.0, float(np.max(np.abs(g))))
        if annihilation > tol.rank_tol * scale * p:
            raise ValueError(
                "range_basis does not span the column space of G "
                "(complement dual fails to annihilate G)"
            )
    if h2.size:
        cross = float(np.max(np.abs(h1.T @ h2)))
        cross_scale = max(1.0, float(np.max(np.abs(h1)))) * max(1.0, float(np.max(np.abs(h2))))
        orthogonal = cross <= tol.rank_tol * cross_scale * p
    else:
        orthogonal = True
    return SubspaceDecomposition(
        range_basis=h1,
        range_dual=f1,
        complement_basis=h2,
        complement_dual=f2,
        rank=m,
        orthogonal=bool(orthogonal),
        tol=tol,
    )


def is_trackable(dec: SubspaceDecomposition, yd, tol: Tolerance | None = None) -> bool:
    """Whether the reference lies in the reachable subspace.

    Tests ``H1 @ F1.T @ yd = yd`` relative to the sup-norm of ``yd``;
    the zero reference is trackable in every system.
    """
    tol = tol or dec.tol
    y = check_vector(yd, dec.output_dim, "yd")
    scale = float(np.max(np.abs(y)))
    if scale == 0.0:
        return True
    projected = dec.range_basis @ (dec.range_dual.T @ y)
    return float(np.max(np.abs(projected - y))) <= tol.rank_tol * scale * dec.output_dim


def classify_system(G, tol: Tolerance | None = None) -> SystemClassification:
    """Rank-based reachability classification of the system matrix."""
    g = check_matrix(G, "G")
    p, q = g.shape
    m = rank_of(g, tol)
    return SystemClassification(
        rank=m,
        trackability_property=(m == p),
        realizability_property=(m == p == q),
        realizable_subspace_trivial=(m < q),
    )


def uncontrollable_component(dec: SubspaceDecomposition, error) -> np.ndarray:
    """Error coordinates no input update can move: ``F2.T @ error``.

    Along any learning run this value stays constant, which is why a
    nonzero value certifies an unreachable reference.
    """
    e = check_vector(error, dec.output_dim, "error")
    return dec.complement_dual.T @ e


def project_trackable(dec: SubspaceDecomposition, yd) -> np.ndarray:
    """Projection of the reference onto the reachable subspace.

    Returns ``H1 @ F1.T @ yd``, the idempotent projection along the
    chosen complement. For an orthogonal decomposition this is the
    orthogonal projection, hence the best reachable approximation.
    """
    y = check_vector(yd, dec.output_dim, "yd")
    return dec.range_basis @ (dec.range_dual.T @ y)
