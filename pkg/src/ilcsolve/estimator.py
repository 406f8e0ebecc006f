"""Scikit-learn estimator facade over the iterative solver."""

from __future__ import annotations

from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .gains import MODE_DEADBEAT, MODE_EXPONENTIAL, design_deadbeat, design_exponential
from .linalg import Tolerance
from .solver import solve
from .subspace import build_decomposition
from .validation import check_matrix, check_vector

__all__ = ["IlcSolver"]


class IlcSolver(RegressorMixin, BaseEstimator):
    """Linear solver with learning-type iterations, in estimator clothing.

    ``fit(X, y)`` treats ``X`` as the system matrix and ``y`` as the
    reference, runs the learning iteration, and stores the reached
    solution as ``coef_`` so the object drops into pipelines wherever a
    linear model without intercept fits. Rank-deficient and
    inconsistent systems are handled: the fit classifies the problem
    and, when no exact solution exists, converges to a least-squares
    solution instead of failing.

    Parameters
    ----------
    gain : {"deadbeat", "exponential"}, default="deadbeat"
        Gain family. Deadbeat converges in at most ``rank(X)``
        iterations; exponential contracts the reachable error by
        ``alpha`` per iteration.
    alpha : float, default=0.5
        Contraction ratio for the exponential family; ignored for
        deadbeat.
    rank_tol : float, default=1e-10
        Relative rank threshold.
    conv_tol : float, default=1e-10
        Sup-norm stopping tolerance.
    max_iter : int, default=10000
        Iteration budget.
    initial_input : array-like of shape (n_features,), optional
        Starting input; defaults to zero. Different starting inputs
        select different members of the solution set.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
        Reached solution.
    classification_ : str
        "solvable" or "least_squares".
    residual_norm_ : float
        Euclidean residual of the reached solution.
    rank_ : int
        Numeric rank of the system matrix.
    n_iter_ : int
        Iterations performed.
    solution_ : SolutionSet
        Full solution-set description (affine map and null-space basis).
    trace_ : IlcTrace
        Per-iteration history.
    gain_spec_ : GainSpec
        The designed gain with its convergence certificate.
    """

    def __init__(
        self,
        gain: str = MODE_DEADBEAT,
        alpha: float = 0.5,
        rank_tol: float = 1e-10,
        conv_tol: float = 1e-10,
        max_iter: int = 10_000,
        initial_input=None,
    ):
        self.gain = gain
        self.alpha = alpha
        self.rank_tol = rank_tol
        self.conv_tol = conv_tol
        self.max_iter = max_iter
        self.initial_input = initial_input

    def fit(self, X, y):
        """Solve ``X @ coef = y`` in the exact or least-squares sense."""
        g = check_matrix(X, "X")
        target = check_vector(y, g.shape[0], "y")
        tol = Tolerance(rank_tol=self.rank_tol, conv_tol=self.conv_tol)
        dec = build_decomposition(g, tol)
        if self.gain == MODE_DEADBEAT:
            spec = design_deadbeat(dec, g, tol=tol)
        elif self.gain == MODE_EXPONENTIAL:
            spec = design_exponential(dec, g, self.alpha, tol=tol)
        else:
            raise ValueError(
                f"gain must be '{MODE_DEADBEAT}' or '{MODE_EXPONENTIAL}', got {self.gain!r}"
            )
        solution, trace = solve(
            g,
            target,
            spec,
            u0=self.initial_input,
            tol=tol,
            max_iter=self.max_iter,
        )
        self.coef_ = solution.particular
        self.classification_ = solution.classification
        self.residual_norm_ = solution.residual_norm
        self.rank_ = dec.rank
        self.n_iter_ = trace.iterations
        self.solution_ = solution
        self.trace_ = trace
        self.gain_spec_ = spec
        self.decomposition_ = dec
        return self

    def predict(self, X):
        """Outputs of the fitted solution for new system rows."""
        if not hasattr(self, "coef_"):
            raise NotFittedError("this IlcSolver instance is not fitted yet")
        g = check_matrix(X, "X")
        return g @ self.coef_
