"""Finite-horizon state-space front end.

A repetitive tracking task for ``x(t+1) = A x(t) + B u(t)``,
``y(t) = C x(t)`` over a fixed horizon reduces to one matrix equation
by stacking the input and output samples into super-vectors: the plant
becomes a lower block-Toeplitz matrix whose block diagonals carry the
impulse-response (Markov) blocks ``C A**(i+r-1) B``, with ``r`` the
uniform input-output delay. Every subspace, gain and solver tool of
this package then applies to the stacked system unchanged; the
per-time-step update law is algebraically the stacked update law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    GainInvalidError,
    NoUniformRelativeDegreeError,
    WrongSampleCountError,
)
from .linalg import DEFAULT_TOLERANCE, Tolerance
from .solver import (
    TERMINATION_MAX_ITERATIONS,
    TERMINATION_TOLERANCE,
    IlcTrace,
)
from .subspace import build_decomposition, is_trackable, project_trackable
from .validation import check_matrix, check_vector

__all__ = [
    "StateSpaceSystem",
    "LiftedSystem",
    "relative_degree",
    "build_lifted",
    "lift_reference",
    "shift_reference",
    "simulate",
    "run_tracking",
]


@dataclass(frozen=True)
class StateSpaceSystem:
    """Discrete-time system (A, B, C) over a fixed horizon.

    Runs always start from the zero state at every trial. ``horizon``
    is the number of input samples per trial; outputs are read at times
    ``r .. horizon + r - 1`` once the delay ``r`` is known.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    horizon: int

    def __post_init__(self):
        a = check_matrix(self.A, "A", square=True)
        b = check_matrix(self.B, "B")
        c = check_matrix(self.C, "C")
        if b.shape[0] != a.shape[0]:
            raise DimensionMismatchError("B must have as many rows as A")
        if c.shape[1] != a.shape[0]:
            raise DimensionMismatchError("C must have as many columns as A")
        if self.horizon < 1:
            raise ValueError("horizon must be a positive integer")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "C", c)

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class LiftedSystem:
    """Stacked form of a state-space system over its horizon.

    ``markov[i]`` is ``C A**(i + r - 1) B``; ``matrix`` is the lower
    block-Toeplitz plant with ``markov[t - s]`` at block ``(t, s)`` for
    ``t >= s``.
    """

    source: StateSpaceSystem
    relative_degree: int
    markov: tuple
    matrix: np.ndarray


def relative_degree(
    system: StateSpaceSystem,
    max_r: int | None = None,
    tol: Tolerance | None = None,
) -> int:
    """Uniform input-output delay of the system.

    Smallest ``r`` such that ``C A**j B`` vanishes entirely for
    ``j < r - 1`` while every row of ``C A**(r-1) B`` is nonzero.
    Entries are compared against ``rank_tol`` times a norm-product
    scale.

    Raises
    ------
    NoUniformRelativeDegreeError
        When some output channel responds strictly earlier than
        another (per-channel delays are out of scope here), or when no
        response shows up within ``max_r`` powers.
    """
    tol = tol or DEFAULT_TOLERANCE
    a, b, c = system.A, system.B, system.C
    if max_r is None:
        max_r = max(1, system.n_states)
    if max_r < 1:
        raise ValueError("max_r must be at least 1")
    a_scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    base_scale = max(1.0, float(np.max(np.abs(c))) * float(np.max(np.abs(b))))
    power = np.eye(system.n_states)
    for j in range(max_r):
        markov = c @ power @ b
        threshold = tol.rank_tol * base_scale * a_scale**j
        row_active = np.max(np.abs(markov), axis=1) > threshold
        if np.all(row_active):
            return j + 1
        if np.any(row_active):
            raise NoUniformRelativeDegreeError(
                f"output channels respond after different delays at power {j}: "
                "no uniform relative degree"
            )
        power = a @ power
    raise NoUniformRelativeDegreeError(
        f"no nonzero impulse response within {max_r} steps"
    )


def build_lifted(system: StateSpaceSystem, tol: Tolerance | None = None) -> LiftedSystem:
    """Markov blocks and the block-Toeplitz plant matrix.

    Powers of A are accumulated by repeated multiplication, never formed
    as explicit matrix powers, to bound error growth over long horizons.
    """
    r = relative_degree(system, tol=tol)
    n, no, ni = system.horizon, system.n_outputs, system.n_inputs
    power = np.eye(system.n_states)
    for _ in range(r - 1):
        power = system.A @ power
    markov = []
    for _ in range(n):
        markov.append(system.C @ power @ system.B)
        power = system.A @ power
    matrix = np.zeros((n * no, n * ni))
    for t in range(n):
        for s in range(t + 1):
            matrix[t * no : (t + 1) * no, s * ni : (s + 1) * ni] = markov[t - s]
    return LiftedSystem(
        source=system,
        relative_degree=r,
        markov=tuple(markov),
        matrix=matrix,
    )


def lift_reference(lifted: LiftedSystem, samples) -> np.ndarray:
    """Stack reference samples (one per horizon step) into a super-vector.

    ``samples`` holds the desired outputs at times
    ``r .. horizon + r - 1``, as a sequence of length-``n_outputs``
    vectors or an equivalent (horizon, n_outputs) array.
    """
    system = lifted.source
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.shape[0] != system.horizon:
        raise WrongSampleCountError(
            f"expected {system.horizon} reference samples, got {samples.shape[0]}"
        )
    if samples.shape[1] != system.n_outputs:
        raise DimensionMismatchError(
            f"each reference sample must have {system.n_outputs} entries"
        )
    if not np.all(np.isfinite(samples)):
        raise ValueError("reference samples contain NaN or infinite entries")
    return samples.reshape(-1)


def shift_reference(
    system: StateSpaceSystem,
    samples,
    initial_state,
    tol: Tolerance | None = None,
) -> np.ndarray:
    """Reference samples minus the free response of a nonzero start state.

    Trials always restart from the zero state, so a desired trajectory
    recorded from a nonzero initial state is generally unreachable as
    recorded; subtracting ``C A**t @ initial_state`` at each sample time
    makes the comparison fair. Never applied implicitly: call this
    before lifting when the reference carries a known start state.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.shape != (system.horizon, system.n_outputs):
        raise DimensionMismatchError(
            f"samples must have shape ({system.horizon}, {system.n_outputs}), "
            f"got {samples.shape}"
        )
    x = check_vector(initial_state, system.n_states, "initial_state")
    r = relative_degree(system, tol=tol)
    for _ in range(r):
        x = system.A @ x
    shifted = samples.copy()
    for i in range(system.horizon):
        shifted[i] -= system.C @ x
        x = system.A @ x
    return shifted


def simulate(system: StateSpaceSystem, inputs, rel_degree: int) -> np.ndarray:
    """Forward time-domain run from the zero state.

    ``inputs`` is a (horizon, n_inputs) array of input samples at times
    ``0 .. horizon - 1``; returns the (horizon, n_outputs) outputs at
    times ``rel_degree .. horizon + rel_degree - 1``. Inputs past the
    horizon are zero, which cannot affect the returned window.
    """
    u = np.asarray(inputs, dtype=float)
    n = system.horizon
    if u.shape != (n, system.n_inputs):
        raise DimensionMismatchError(
            f"inputs must have shape ({n}, {system.n_inputs}), got {u.shape}"
        )
    a, b, c = system.A, system.B, system.C
    x = np.zeros(system.n_states)
    outputs = np.zeros((n, system.n_outputs))
    for t in range(n + rel_degree - 1):
        drive = u[t] if t < n else np.zeros(system.n_inputs)
        x = a @ x + b @ drive
        step = t + 1
        if rel_degree <= step <= n + rel_degree - 1:
            outputs[step - rel_degree] = c @ x
    return outputs


def run_tracking(
    system: StateSpaceSystem,
    reference,
    gain_matrix,
    u0=None,
    iterations: int = 1000,
    tol: Tolerance | None = None,
) -> IlcTrace:
    """Trial-by-trial tracking with a stacked update gain.

    Each trial simulates the plant forward in time from the zero state,
    forms the per-sample tracking errors, and updates the whole input
    sequence at once through ``gain_matrix`` (the stacked equivalent of
    per-time-step gain blocks). The recorded errors are the raw
    reference errors; stopping compares the output against the
    reference when it is reachable and against its reachable projection
    otherwise, mirroring the plain solver so the two produce identical
    iterate sequences for the same gain.

    Hitting the ``iterations`` budget is reported in the trace rather
    than raised: unreachable references legitimately run out the budget.

    The time-domain outputs are cross-checked against the stacked
    product at every trial; disagreement beyond 1e-8 (relative) aborts
    the run, as it voids the lifting identity everything else relies on.
    """
    tol = tol or DEFAULT_TOLERANCE
    lifted = build_lifted(system, tol)
    target_reference = lift_reference(lifted, reference)
    n, ni, no = system.horizon, system.n_inputs, system.n_outputs
    k = np.asarray(gain_matrix, dtype=float)
    if k.shape != (n * ni, n * no):
        raise DimensionMismatchError(
            f"gain must have shape ({n * ni}, {n * no}), got {k.shape}"
        )
    if not np.all(np.isfinite(k)):
        raise GainInvalidError("gain matrix contains NaN or infinite entries")
    if iterations < 1:
        raise ValueError("iterations must be a positive integer")
    u = np.zeros(n * ni) if u0 is None else check_vector(u0, n * ni, "u0")

    dec = build_decomposition(lifted.matrix, tol)
    if is_trackable(dec, target_reference, tol):
        target = target_reference
    else:
        target = project_trackable(dec, target_reference)

    r = lifted.relative_degree
    trace = IlcTrace()
    for trial in range(iterations + 1):
        output = simulate(system, u.reshape(n, ni), r).reshape(-1)
        stacked = lifted.matrix @ u
        scale = max(1.0, float(np.max(np.abs(stacked))))
        if float(np.max(np.abs(output - stacked))) > 1e-8 * scale:
            raise ArithmeticError(
                "time-domain simulation disagrees with the stacked product; "
                "lifting identity violated"
            )
        error = target_reference - output
        trace.inputs.append(u)
        trace.outputs.append(output)
        trace.errors.append(error)
        if float(np.max(np.abs(target - output))) < tol.conv_tol:
            trace.iterations = trial
            trace.converged = True
            trace.termination = TERMINATION_TOLERANCE
            break
        if trial == iterations:
            trace.iterations = iterations
            trace.converged = False
            trace.termination = TERMINATION_MAX_ITERATIONS
            break
        u = u + k @ error
    return trace
