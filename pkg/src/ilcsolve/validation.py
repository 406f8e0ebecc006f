"""Input validation helpers.

All public entry points funnel array-likes through these checks, so the
rest of the package can assume finite, float64, correctly shaped data.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatchError, NonSquareError


def check_matrix(value, name: str = "matrix", *, square: bool = False) -> np.ndarray:
    """Coerce ``value`` to a finite 2-D float64 array.

    Raises ValueError for non-numeric, empty-dimension or non-finite
    input and NonSquareError when ``square`` is requested but violated.
    Zero-column or zero-row matrices are allowed (they arise as empty
    complement bases and empty null-space bases).
    """
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatchError(
            f"{name} must be 2-D, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise NonSquareError(
            f"{name} must be square, got shape {arr.shape[0]}x{arr.shape[1]}"
        )
    return arr


def check_vector(value, length: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce ``value`` to a finite 1-D float64 array.

    Column matrices of shape (n, 1) are flattened; other 2-D shapes are
    rejected. When ``length`` is given the size is cross-checked.
    """
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise DimensionMismatchError(
            f"{name} must be 1-D or a single column, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    if length is not None and arr.size != length:
        raise DimensionMismatchError(
            f"{name} has length {arr.size}, expected {length}"
        )
    return arr
