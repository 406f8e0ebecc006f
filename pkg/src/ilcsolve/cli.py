"""Command-line interface: analyze, solve, lift, track."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .exceptions import IlcsolveError, NotConvergedError
from .gains import MODE_DEADBEAT, MODE_EXPONENTIAL, design_deadbeat, design_exponential
from .lifted import build_lifted, lift_reference, run_tracking
from .linalg import Tolerance
from .oracle import least_squares_oracle
from .problem_io import (
    EXIT_USAGE,
    FORMAT_VERSION,
    ProblemFile,
    emit_history_csv,
    emit_result,
    exit_status,
    format_scalar,
    load_vector,
    parse_problem,
)
from .solver import LEAST_SQUARES, SOLVABLE, solve
from .subspace import (
    build_decomposition,
    classify_system,
    decomposition_from_bases,
    is_trackable,
    project_trackable,
    uncontrollable_component,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilcsolve",
        description=(
            "Solve linear systems G u = y by learning-type iterations, "
            "including rank-deficient and inconsistent ones, and run the "
            "lifted front end for finite-horizon tracking problems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("problem", help="problem document (format: 1)")
        p.add_argument(
            "--gain",
            choices=[MODE_EXPONENTIAL, MODE_DEADBEAT],
            help="gain family (overrides the file option; default deadbeat)",
        )
        p.add_argument("--alpha", type=float, help="contraction ratio for exponential gains")
        p.add_argument("--tol", type=float, help="sup-norm stopping tolerance")
        p.add_argument("--max-iter", type=int, help="iteration budget")
        p.add_argument("--initial-input", help="file with the starting input vector")
        p.add_argument("--history", help="write per-iteration error CSV here")
        p.add_argument("--output", "-o", help="write the result document here (default stdout)")

    p_analyze = sub.add_parser("analyze", help="classification and subspace report")
    p_analyze.add_argument("problem")
    p_analyze.add_argument("--output", "-o")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_solve = sub.add_parser("solve", help="solve the system (exact or least-squares)")
    add_common(p_solve)
    p_solve.add_argument(
        "--verify",
        action="store_true",
        help="cross-check the result against the independent oracle",
    )
    p_solve.set_defaults(func=_cmd_solve)

    p_lift = sub.add_parser("lift", help="emit the stacked plant matrix and Markov blocks")
    p_lift.add_argument("problem")
    p_lift.add_argument("--output", "-o")
    p_lift.set_defaults(func=_cmd_lift)

    p_track = sub.add_parser("track", help="run the finite-horizon tracking iteration")
    add_common(p_track)
    p_track.set_defaults(func=_cmd_track)
    return parser


def _open_output(args):
    if getattr(args, "output", None):
        return open(args.output, "w", encoding="utf-8"), True
    return sys.stdout, False


def _tolerance(problem: ProblemFile, args) -> Tolerance:
    conv = args.tol if getattr(args, "tol", None) is not None else problem.options.get("tol")
    rank = problem.options.get("rank_tol")
    kwargs = {}
    if conv is not None:
        kwargs["conv_tol"] = conv
    if rank is not None:
        kwargs["rank_tol"] = rank
    return Tolerance(**kwargs)


def _decomposition(problem: ProblemFile, matrix, tol):
    if problem.range_basis is not None:
        return decomposition_from_bases(
            matrix, problem.range_basis, problem.complement_basis, tol
        )
    return build_decomposition(matrix, tol)


def _design(problem: ProblemFile, args, dec, matrix, tol):
    mode = getattr(args, "gain", None) or problem.options.get("gain", MODE_DEADBEAT)
    alpha = args.alpha if getattr(args, "alpha", None) is not None else problem.options.get("alpha", 0.5)
    if mode == MODE_EXPONENTIAL:
        return design_exponential(dec, matrix, alpha, tol)
    if mode == MODE_DEADBEAT:
        return design_deadbeat(dec, matrix, tol=tol)
    raise IlcsolveError(f"unknown gain mode {mode!r}")


def _plain_system(problem: ProblemFile, tol):
    """System matrix and flat reference, lifting a state-space problem if needed."""
    if problem.matrix is not None:
        return problem.matrix, problem.reference
    lifted = build_lifted(problem.state_space, tol)
    reference = None
    if problem.reference_samples is not None:
        reference = lift_reference(lifted, problem.reference_samples)
    return lifted.matrix, reference


def _max_iter(problem: ProblemFile, args, default=10_000) -> int:
    if getattr(args, "max_iter", None) is not None:
        return args.max_iter
    return problem.options.get("max_iter", default)


def _cmd_analyze(args) -> int:
    problem = parse_problem(args.problem)
    tol = _tolerance(problem, args)
    matrix, reference = _plain_system(problem, tol)
    info = classify_system(matrix, tol)
    dec = _decomposition(problem, matrix, tol)
    stream, close = _open_output(args)
    try:
        print(f"format: {FORMAT_VERSION}", file=stream)
        print(f"rows: {matrix.shape[0]}", file=stream)
        print(f"cols: {matrix.shape[1]}", file=stream)
        print(f"rank: {info.rank}", file=stream)
        print(f"trackability_property: {str(info.trackability_property).lower()}", file=stream)
        print(f"realizability_property: {str(info.realizability_property).lower()}", file=stream)
        print(
            f"realizable_subspace_trivial: {str(info.realizable_subspace_trivial).lower()}",
            file=stream,
        )
        print(f"orthogonal_complement: {str(dec.orthogonal).lower()}", file=stream)
        if reference is not None:
            trackable = is_trackable(dec, reference, tol)
            print(f"reference_trackable: {str(trackable).lower()}", file=stream)
            residual = uncontrollable_component(dec, reference)
            norm = float(np.max(np.abs(residual))) if residual.size else 0.0
            print(f"unreachable_component_norm: {format_scalar(norm)}", file=stream)
            projected = project_trackable(dec, reference)
            print(
                f"projection_distance: {format_scalar(float(np.linalg.norm(projected - reference)))}",
                file=stream,
            )
    finally:
        if close:
            stream.close()
    return 0


def _cmd_solve(args) -> int:
    problem = parse_problem(args.problem)
    tol = _tolerance(problem, args)
    matrix, reference = _plain_system(problem, tol)
    if reference is None:
        raise IlcsolveError("solve needs a Yd block in the problem document")
    dec = _decomposition(problem, matrix, tol)
    spec = _design(problem, args, dec, matrix, tol)
    u0 = problem.initial_input
    if args.initial_input:
        u0 = load_vector(args.initial_input, matrix.shape[1])

    verify_lines = None
    stream, close = _open_output(args)
    try:
        try:
            solution, trace = solve(
                matrix, reference, spec, u0=u0, tol=tol, max_iter=_max_iter(problem, args)
            )
        except NotConvergedError as err:
            if args.history:
                emit_history_csv(err.trace, args.history)
            return emit_result(
                None,
                err.trace,
                stream,
                classification=err.classification,
                certificate=spec.certificate,
            )
        if args.verify:
            verdict = least_squares_oracle(matrix, reference, tol)
            agree_class = verdict.solvable == (solution.classification == SOLVABLE)
            residual_gap = abs(verdict.residual_norm - solution.residual_norm)
            difference = solution.particular - verdict.min_norm_solution
            in_null = float(np.linalg.norm(matrix @ difference))
            verify_lines = {
                "verify_classification_agrees": str(agree_class).lower(),
                "verify_residual_gap": format_scalar(residual_gap),
                "verify_null_space_gap": format_scalar(in_null),
            }
        if args.history:
            emit_history_csv(trace, args.history)
        return emit_result(
            solution,
            trace,
            stream,
            certificate=spec.certificate,
            verify_lines=verify_lines,
        )
    finally:
        if close:
            stream.close()


def _cmd_lift(args) -> int:
    problem = parse_problem(args.problem)
    if problem.state_space is None:
        raise IlcsolveError("lift needs a state-space problem (A, B, C, N)")
    lifted = build_lifted(problem.state_space)
    stream, close = _open_output(args)
    try:
        print(f"format: {FORMAT_VERSION}", file=stream)
        print(f"relative_degree: {lifted.relative_degree}", file=stream)
        print(f"horizon: {problem.state_space.horizon}", file=stream)
        print("# Markov blocks stacked vertically, earliest first", file=stream)
        print("markov:", file=stream)
        for block in lifted.markov:
            for row in np.atleast_2d(block):
                print(" ".join(format_scalar(v) for v in row), file=stream)
        print("G:", file=stream)
        for row in lifted.matrix:
            print(" ".join(format_scalar(v) for v in row), file=stream)
    finally:
        if close:
            stream.close()
    return 0


def _cmd_track(args) -> int:
    problem = parse_problem(args.problem)
    if problem.state_space is None:
        raise IlcsolveError("track needs a state-space problem (A, B, C, N)")
    if problem.reference_samples is None:
        raise IlcsolveError("track needs a Yd block of reference samples")
    tol = _tolerance(problem, args)
    lifted = build_lifted(problem.state_space, tol)
    dec = _decomposition(problem, lifted.matrix, tol)
    spec = _design(problem, args, dec, lifted.matrix, tol)
    reference = lift_reference(lifted, problem.reference_samples)
    u0 = problem.initial_input
    if args.initial_input:
        u0 = load_vector(args.initial_input, lifted.matrix.shape[1])
    trace = run_tracking(
        problem.state_space,
        problem.reference_samples,
        spec.gain,
        u0=u0,
        iterations=_max_iter(problem, args, default=1000),
        tol=tol,
    )
    classification = SOLVABLE if is_trackable(dec, reference, tol) else LEAST_SQUARES
    status = exit_status(classification, trace.termination)
    if args.history:
        emit_history_csv(trace, args.history)
    stream, close = _open_output(args)
    try:
        print(f"format: {FORMAT_VERSION}", file=stream)
        print(f"classification: {classification}", file=stream)
        print(f"converged: {str(trace.converged).lower()}", file=stream)
        print(f"termination: {trace.termination}", file=stream)
        print(f"iterations: {trace.iterations}", file=stream)
        print(f"status: {status}", file=stream)
        print(
            f"certificate_radius: {format_scalar(spec.certificate.spectral_radius)}",
            file=stream,
        )
        final_error = trace.error_history()[-1] if trace.errors else 0.0
        print(f"final_error_inf_norm: {format_scalar(final_error)}", file=stream)
        print("final_input:", file=stream)
        for value in trace.inputs[-1]:
            print(format_scalar(value), file=stream)
        print("error_history:", file=stream)
        for k, err in enumerate(trace.error_history()):
            print(f"{k} {format_scalar(err)}", file=stream)
    finally:
        if close:
            stream.close()
    return status


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IlcsolveError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
