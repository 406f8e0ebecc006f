"""Shared test utilities: the worked 5x3 system and labeled random instances."""

import numpy as np
import scipy.linalg

import ilcsolve as il

# 5x3 system of rank 2 (third column = first minus second), used across
# the suite because every interesting quantity has a hand-checkable
# closed form.
EXAMPLE_G = np.array(
    [
        [1.0, 0.0, 1.0],
        [0.0, 3.0, -3.0],
        [0.0, 4.0, -4.0],
        [2.0, 0.0, 2.0],
        [2.0, 0.0, 2.0],
    ]
)
EXAMPLE_YD_SOLVABLE = np.array([1.0, 3.0, 4.0, 2.0, 2.0])
EXAMPLE_YD_INCONSISTENT = np.array([1.0, 2.0, 1.0, 1.0, 2.0])
EXAMPLE_U0 = np.array([1.0, 0.0, 0.0])
EXAMPLE_SHIFT = np.array([[0.0, 1.0], [0.0, 0.0]])

# Known limits for the two references above (exact rationals).
EXAMPLE_SOLUTION_SOLVABLE = np.array([4.0, 2.0, -1.0]) / 3.0
EXAMPLE_SOLUTION_LS = np.array([133.0, 26.0, -28.0]) / 135.0
EXAMPLE_LIMIT_MATRIX = np.array(
    [[1.0, -1.0, -1.0], [-1.0, 1.0, 1.0], [-1.0, 1.0, 1.0]]
) / 3.0
EXAMPLE_OFFSET_SOLVABLE = np.array([1.0, 1.0, 0.0])
EXAMPLE_OFFSET_LS = np.array([88.0, 71.0, 17.0]) / 135.0
EXAMPLE_RESIDUAL_LS = np.sqrt(14.0) / 3.0


def random_system(rng, p=None, q=None, rank=None, max_dim=8):
    """Random p x q matrix with an exactly enforced rank.

    Assembled from random orthonormal factors and singular values drawn
    from [0.3, 3], so the labeled rank is unambiguous and every derived
    quantity (Gram inverses, gain formulas) stays well conditioned; the
    properties under test are exact-arithmetic claims, not conditioning
    stress tests.
    """
    p = int(p) if p is not None else int(rng.integers(1, max_dim + 1))
    q = int(q) if q is not None else int(rng.integers(1, max_dim + 1))
    top = min(p, q)
    m = int(rank) if rank is not None else int(rng.integers(1, top + 1))
    assert 1 <= m <= top
    core = np.linalg.qr(rng.standard_normal((p, m)))[0] @ np.diag(rng.uniform(0.5, 2.0, m))
    positions = {0} | set(rng.choice(np.arange(1, q), size=m - 1, replace=False)) if m > 1 else {0}
    columns = []
    emitted = 0
    for j in range(q):
        if j in positions:
            columns.append(core[:, emitted])
            emitted += 1
        else:
            weights = rng.uniform(-1.0, 1.0, emitted)
            columns.append(core[:, :emitted] @ weights)
    return np.column_stack(columns)


def solvable_reference(rng, g):
    """Reference constructed as the image of a random input."""
    return g @ rng.standard_normal(g.shape[1])


def inconsistent_reference(rng, g):
    """Image of a random input plus a complement component of size >= 0.25.

    Requires the matrix to have row-rank deficiency; the complement part
    guarantees the label without any rank estimation.
    """
    complement = scipy.linalg.null_space(g.T)
    assert complement.shape[1] > 0, "matrix has full row rank; cannot force inconsistency"
    coeff = rng.uniform(0.25, 1.0, complement.shape[1]) * rng.choice(
        [-1.0, 1.0], complement.shape[1]
    )
    return g @ rng.standard_normal(g.shape[1]) + complement @ coeff


def random_state_space(rng, max_dim=3, max_horizon=5):
    """Random state-space instance with relative degree one.

    The first impulse block C @ B is kept numerically clean: either
    full effective rank with singular values bounded away from zero, or
    exactly rank-deficient (built through a thin coupling factor), so
    downstream rank decisions are unambiguous.
    """
    ns = int(rng.integers(1, max_dim + 1))
    ni = int(rng.integers(1, max_dim + 1))
    no = int(rng.integers(1, max_dim + 1))
    horizon = int(rng.integers(1, max_horizon + 1))
    top = min(ns, ni, no)
    deficient = top > 1 and rng.random() < 0.4
    while True:
        a = rng.standard_normal((ns, ns)) * 0.5
        c = rng.standard_normal((no, ns))
        if deficient:
            r0 = int(rng.integers(1, top))
            b = np.linalg.qr(rng.standard_normal((ns, r0)))[0] @ rng.standard_normal((r0, ni))
        else:
            b = rng.standard_normal((ns, ni))
        first = c @ b
        sv = np.linalg.svd(first, compute_uv=False)
        effective = sv[sv > 1e-9 * max(sv[0], 1.0)]
        if effective.size and effective[-1] > 0.2 and np.all(
            np.max(np.abs(first), axis=1) > 0.2
        ):
            return il.StateSpaceSystem(A=a, B=b, C=c, horizon=horizon)
