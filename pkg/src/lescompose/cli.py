"""Command-line driver: ``lescompose {validate,traces,solve,verify-maximality}``.

Exit status: 0 on success, 1 when validation or solving fails, 2 on usage
errors (bad flags, unreadable files).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .configurations import enumerate_traces
from .errors import LesError
from .fileformat import load_model, load_problem
from .les import validate_les
from .render import RENDERERS
from .smt import DEFAULT_SOLVER_CMD, emit_smtlib, run_external
from .solver import BACKENDS, solve_native, solve_oracle
from .verify import check_maximality_equivalence, emit_equivalence_smt


class _Usage(Exception):
    pass


def _read_model(path):
    try:
        return load_model(path)
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def cmd_validate(args) -> int:
    les = _read_model(args.model)
    report = validate_les(les)
    print(f"model {les.name}: {len(les.events)} events")
    print(report)
    return 0 if report.passed else 1


def cmd_traces(args) -> int:
    les = _read_model(args.model)
    traces = enumerate_traces(les)
    for i, t in enumerate(traces, start=1):
        print(f"trace {i}: " + " ".join(e.local for e in sorted(t.events)))
    print(f"{len(traces)} trace(s)")
    return 0


def cmd_solve(args) -> int:
    try:
        problem = load_problem(args.model, args.scenario)
    except OSError as exc:
        raise _Usage(f"cannot read {exc.filename}: {exc.strerror}") from None
    if args.emit_smt:
        Path(args.emit_smt).write_text(emit_smtlib(problem), encoding="utf-8")
    if args.backend == "oracle":
        schedule = solve_oracle(problem)
    elif args.backend == "native":
        schedule = solve_native(problem)
    else:
        schedule = run_external(problem, args.solver_cmd)
    sys.stdout.write(RENDERERS[args.format](schedule))
    return 0


def cmd_verify(args) -> int:
    les = _read_model(args.model)
    if args.emit_smt:
        Path(args.emit_smt).write_text(emit_equivalence_smt(les), encoding="utf-8")
    result = check_maximality_equivalence(les)
    print(result)
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lescompose",
        description="Compose labelled event structures into an optimal dephased schedule.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the event-structure axioms of a model file")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("traces", help="list every trace (maximal configuration) of a model")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("solve", help="find the best joint schedule")
    p.add_argument("--model", action="append", required=True, help="model file; repeat for each model")
    p.add_argument("--scenario", required=True, help="offsets and label conflicts")
    p.add_argument("--backend", choices=BACKENDS, default="native")
    p.add_argument("--solver-cmd", default=DEFAULT_SOLVER_CMD, help="external SMT solver reading SMT-LIB on stdin")
    p.add_argument("--format", choices=sorted(RENDERERS), default="table")
    p.add_argument("--emit-smt", metavar="PATH", help="also write the SMT-LIB encoding to PATH")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-maximality", help="check the SMT maximality test against the trace definition")
    p.add_argument("--model", required=True)
    p.add_argument("--emit-smt", metavar="PATH", help="write the solver cross-check file to PATH")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"lescompose: error: {exc}", file=sys.stderr)
        return 2
    except LesError as exc:
        print(f"lescompose: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
