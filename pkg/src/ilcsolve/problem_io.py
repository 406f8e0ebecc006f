"""Problem-document parsing and result emission.

Documents are plain text with a ``format: 1`` header. Scalar options
use ``key: value`` lines; matrices use a ``key:`` line followed by one
whitespace-separated row per line. ``#`` starts a comment. Numbers are
written back with 17 significant digits, which round-trips float64
exactly. Bare matrices (for ``--initial-input``) may also be CSV.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatchError, ParseError
from .lifted import StateSpaceSystem
from .solver import (
    LEAST_SQUARES,
    TERMINATION_TOLERANCE,
    IlcTrace,
    SolutionSet,
)
from .validation import check_matrix, check_vector

__all__ = [
    "ProblemFile",
    "parse_problem",
    "load_vector",
    "emit_result",
    "emit_history_csv",
    "exit_status",
    "format_scalar",
]

FORMAT_VERSION = 1

_MATRIX_KEYS = {"G", "A", "B", "C", "Yd", "U0", "H1", "H2"}
_SCALAR_KEYS = {"format", "N", "gain", "alpha", "tol", "rank_tol", "max_iter"}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LEAST_SQUARES = 2
EXIT_NOT_CONVERGED = 3


@dataclass
class ProblemFile:
    """Parsed problem document.

    Exactly one of ``matrix`` (a plain linear system) or ``state_space``
    (a finite-horizon plant) is present. ``reference`` is the flat
    right-hand side for plain systems; ``reference_samples`` holds one
    output sample per horizon step for state-space problems.
    """

    matrix: np.ndarray | None = None
    state_space: StateSpaceSystem | None = None
    reference: np.ndarray | None = None
    reference_samples: np.ndarray | None = None
    initial_input: np.ndarray | None = None
    range_basis: np.ndarray | None = None
    complement_basis: np.ndarray | None = None
    options: dict = field(default_factory=dict)


def format_scalar(value: float) -> str:
    return f"{value:.17g}"


def _format_block(name: str, matrix: np.ndarray) -> str:
    arr = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = [f"{name}:"]
    for row in arr:
        lines.append(" ".join(format_scalar(v) for v in row))
    return "\n".join(lines)


def _is_numeric_row(line: str) -> bool:
    token = line.split()[0] if line.split() else ""
    if not token:
        return False
    try:
        float(token)
        return True
    except ValueError:
        return False


def _parse_blocks(text: str):
    """Split a document into scalar options and matrix blocks."""
    scalars: dict[str, str] = {}
    blocks: dict[str, np.ndarray] = {}
    current_key = None
    current_rows: list[list[float]] = []
    current_line = 0

    def close_block(lineno):
        nonlocal current_key, current_rows
        if current_key is None:
            return
        if not current_rows:
            raise ParseError(f"block '{current_key}' has no rows", line=lineno)
        widths = {len(r) for r in current_rows}
        if len(widths) != 1:
            raise ParseError(
                f"block '{current_key}' has ragged rows", line=lineno
            )
        blocks[current_key] = np.array(current_rows, dtype=float)
        current_key = None
        current_rows = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if _is_numeric_row(line):
            if current_key is None:
                raise ParseError("numeric row outside any block", line=lineno)
            try:
                current_rows.append([float(v) for v in line.split()])
            except ValueError:
                raise ParseError(
                    f"bad numeric row in block '{current_key}'", line=lineno
                ) from None
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key:' or 'key: value', got {line!r}", line=lineno)
        close_block(lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key in _MATRIX_KEYS:
            if value:
                raise ParseError(
                    f"matrix key '{key}' takes rows on following lines", line=lineno
                )
            if key in blocks:
                raise ParseError(f"duplicate block '{key}'", line=lineno)
            current_key = key
            current_line = lineno
        elif key in _SCALAR_KEYS:
            if not value:
                raise ParseError(f"scalar key '{key}' needs a value", line=lineno)
            if key in scalars:
                raise ParseError(f"duplicate option '{key}'", line=lineno)
            scalars[key] = value
        else:
            raise ParseError(f"unknown key '{key}'", line=lineno)
    close_block(current_line)
    return scalars, blocks


def _as_vector(block: np.ndarray, name: str) -> np.ndarray:
    if block.shape[0] == 1:
        return block[0]
    if block.shape[1] == 1:
        return block[:, 0]
    raise ParseError(f"block '{name}' must be a single row or column")


def parse_problem(path) -> ProblemFile:
    """Parse a problem document; all cross-checks happen here.

    Raises ParseError with line context for malformed documents and
    DimensionMismatchError when the pieces disagree in shape.
    """
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    scalars, blocks = _parse_blocks(text)

    if scalars.get("format") != str(FORMAT_VERSION):
        raise ParseError(
            f"missing or unsupported 'format:' header (expected {FORMAT_VERSION})"
        )

    has_plain = "G" in blocks
    state_keys = [k for k in ("A", "B", "C") if k in blocks]
    has_state = bool(state_keys) or "N" in scalars
    if has_plain and has_state:
        raise ParseError("give either G or A/B/C/N, not both")
    if not has_plain and not has_state:
        raise ParseError("no system given: need either G or A/B/C/N")
    if has_state and (len(state_keys) != 3 or "N" not in scalars):
        raise ParseError("state-space problems need all of A, B, C and N")

    problem = ProblemFile()
    options = problem.options
    for key in ("gain",):
        if key in scalars:
            options[key] = scalars[key]
    for key in ("alpha", "tol", "rank_tol"):
        if key in scalars:
            try:
                options[key] = float(scalars[key])
            except ValueError:
                raise ParseError(f"option '{key}' must be a number") from None
    if "max_iter" in scalars:
        try:
            options["max_iter"] = int(scalars["max_iter"])
        except ValueError:
            raise ParseError("option 'max_iter' must be an integer") from None

    if has_plain:
        g = check_matrix(blocks["G"], "G")
        problem.matrix = g
        if "Yd" in blocks:
            problem.reference = check_vector(
                _as_vector(blocks["Yd"], "Yd"), g.shape[0], "Yd"
            )
        if "U0" in blocks:
            problem.initial_input = check_vector(
                _as_vector(blocks["U0"], "U0"), g.shape[1], "U0"
            )
        p = g.shape[0]
    else:
        try:
            horizon = int(scalars["N"])
        except ValueError:
            raise ParseError("option 'N' must be an integer") from None
        system = StateSpaceSystem(
            A=blocks["A"], B=blocks["B"], C=blocks["C"], horizon=horizon
        )
        problem.state_space = system
        if "Yd" in blocks:
            samples = blocks["Yd"]
            if samples.shape != (horizon, system.n_outputs):
                raise DimensionMismatchError(
                    f"Yd must hold {horizon} rows of {system.n_outputs} samples, "
                    f"got {samples.shape[0]}x{samples.shape[1]}"
                )
            problem.reference_samples = samples
        if "U0" in blocks:
            problem.initial_input = check_vector(
                _as_vector(blocks["U0"], "U0"),
                horizon * system.n_inputs,
                "U0",
            )
        p = horizon * system.n_outputs

    if ("H1" in blocks) != ("H2" in blocks):
        raise ParseError("H1 and H2 must be given together")
    if "H1" in blocks:
        h1 = check_matrix(blocks["H1"], "H1")
        h2 = check_matrix(blocks["H2"], "H2")
        if h1.shape[0] != p or h2.shape[0] != p or h1.shape[1] + h2.shape[1] != p:
            raise DimensionMismatchError(
                "injected H1/H2 must stack to a square matrix matching the output dimension"
            )
        problem.range_basis = h1
        problem.complement_basis = h2
    return problem


def load_vector(path, length=None) -> np.ndarray:
    """Read a bare vector from a whitespace or CSV file."""
    with open(path, "r", encoding="utf-8") as handle:
        rows = []
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                rows.append([float(v) for v in parts])
            except ValueError:
                raise ParseError(f"bad numeric row in {path!s}") from None
    if not rows:
        raise ParseError(f"no numeric data in {path!s}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"ragged rows in {path!s}")
    return check_vector(_as_vector(np.array(rows), str(path)), length, "initial input")


def exit_status(classification: str | None, termination: str) -> int:
    """Process exit status as a function of classification and termination."""
    if termination != TERMINATION_TOLERANCE:
        return EXIT_NOT_CONVERGED
    if classification == LEAST_SQUARES:
        return EXIT_LEAST_SQUARES
    return EXIT_OK


def emit_result(
    solution: SolutionSet | None,
    trace: IlcTrace,
    stream,
    classification: str | None = None,
    certificate=None,
    verify_lines: dict | None = None,
) -> int:
    """Write a result document and return the exit status.

    A missing ``solution`` marks a run that exhausted its budget; the
    partial history is still emitted.
    """
    classification = solution.classification if solution else classification
    status = exit_status(classification, trace.termination)
    out = io.StringIO()
    print(f"format: {FORMAT_VERSION}", file=out)
    print(f"classification: {classification or 'unknown'}", file=out)
    print(f"converged: {str(trace.converged).lower()}", file=out)
    print(f"termination: {trace.termination}", file=out)
    print(f"iterations: {trace.iterations}", file=out)
    print(f"status: {status}", file=out)
    if certificate is not None:
        print(f"certificate_radius: {format_scalar(certificate.spectral_radius)}", file=out)
        if certificate.deadbeat_index is not None:
            print(f"certificate_deadbeat_index: {certificate.deadbeat_index}", file=out)
    if solution is not None:
        print(f"residual_norm: {format_scalar(solution.residual_norm)}", file=out)
        print(_format_block("particular", solution.particular[:, None]), file=out)
        print(_format_block("limit_matrix", solution.limit_matrix), file=out)
        print(_format_block("limit_offset", solution.limit_offset[:, None]), file=out)
        print(f"null_dimension: {solution.null_basis.shape[1]}", file=out)
        if solution.null_basis.size:
            print(_format_block("null_basis", solution.null_basis), file=out)
    if verify_lines:
        for key, value in verify_lines.items():
            print(f"{key}: {value}", file=out)
    print("error_history:", file=out)
    for k, err in enumerate(trace.error_history()):
        print(f"{k} {format_scalar(err)}", file=out)
    stream.write(out.getvalue())
    return status


def emit_history_csv(trace: IlcTrace, path) -> None:
    """Write the per-iteration sup-norm error history as CSV."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("iteration,error_inf_norm\n")
        for k, err in enumerate(trace.error_history()):
            handle.write(f"{k},{format_scalar(err)}\n")
