"""
SMT-LIB v2 emission of a composition problem and an external-solver driver.

All quantifiers are expanded over the finite event sets, so the emitted
file is ground. Events become constructors of one enumerated sort
``Event``, named ``<model>_<local>``. Uninterpreted functions:

``sel``      Event -> Bool, event is part of the model's trace
``s_<m>``    Event -> Int, rank inside model ``m``
``clock``    Event -> Int, start time (meaningful for selected events)
``score``    Event -> Int, priority if selected
``Score``    Event Event -> Int, overlap penalty of an ordered pair

The solver must support ``maximize`` and ``get-objectives`` (z3 does).
"""

from __future__ import annotations

import itertools
import re
import shlex
import subprocess

from .errors import (
    InvalidSchedule,
    ModelParseError,
    ObjectiveMismatch,
    SolverReportedUnsat,
    SolverUnavailable,
)
from .les import EventId, LabelledEventStructure
from .problem import CompositionProblem, ScheduledTrace, build_schedule, smt_symbol
from .schedule import RankFunction
from .scoring import label_conflict_weight

DEFAULT_SOLVER_CMD = "z3 -in -smt2"


def num(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def conj(items) -> str:
    items = list(items)
    if not items:
        return "true"
    return items[0] if len(items) == 1 else "(and " + " ".join(items) + ")"


def disj(items) -> str:
    items = list(items)
    if not items:
        return "false"
    return items[0] if len(items) == 1 else "(or " + " ".join(items) + ")"


def sel(e: EventId) -> str:
    return f"(sel {smt_symbol(e)})"


def declare_events(events) -> list[str]:
    events = list(events)
    if not events:
        return []
    ctors = " ".join(f"({smt_symbol(e)})" for e in events)
    return [f"(declare-datatypes ((Event 0)) (({ctors})))", "(declare-fun sel (Event) Bool)"]


def maximality_clauses(model: LabelledEventStructure, *, literal: bool = False) -> list[str]:
    """One ground clause per event: if ``z`` is unselected, a selected rival
    or an unselected immediate predecessor must block it."""
    out = []
    for z in model.events:
        blockers = [sel(y) for y in sorted(model.rivals(z))]
        blockers += [f"(not {sel(y)})" for y in sorted(model.immediate_predecessors(z))]
        body = disj(blockers)
        out.append(body if literal else disj([sel(z), body]) if blockers else sel(z))
    return out


def configuration_clauses(model: LabelledEventStructure) -> list[str]:
    out = []
    for p in sorted(model.conflict, key=sorted):
        a, b = sorted(p)
        out.append(f"(not (and {sel(a)} {sel(b)}))")
    for a, b in sorted(model.immediate_causality):
        out.append(f"(=> {sel(b)} {sel(a)})")
    return out


def emit_smtlib(problem: CompositionProblem) -> str:
    lines = ["; composition of labelled event structures", "(set-option :produce-models true)"]
    lines += declare_events(problem.events)
    if problem.events:
        lines += [
            "(declare-fun clock (Event) Int)",
            "(declare-fun score (Event) Int)",
            "(declare-fun Score (Event Event) Int)",
        ]
        lines += [f"(declare-fun s_{m.name} (Event) Int)" for m in problem.models if m.events]
    lines.append("(declare-const objective Int)")

    terms = []
    for m in problem.models:
        if not m.events:
            continue
        s = f"s_{m.name}"
        rank = lambda e: f"({s} {smt_symbol(e)})"  # noqa: E731
        lines.append(f"; model {m.name}: configuration")
        lines += [f"(assert {c})" for c in configuration_clauses(m)]
        lines.append(f"; model {m.name}: maximality")
        lines += [f"(assert {c})" for c in maximality_clauses(m)]

        lines.append(f"; model {m.name}: rank is an order-preserving bijection onto 1..{len(m)}, selected first")
        for a, b in sorted(m.causality):
            if a != b:
                lines.append(f"(assert (<= {rank(a)} {rank(b)}))")
        if len(m) > 1:
            lines.append("(assert (distinct " + " ".join(rank(e) for e in m.events) + "))")
        for e in m.events:
            lines.append(f"(assert (and (>= {rank(e)} 1) (<= {rank(e)} {len(m)})))")
        for j, k in itertools.permutations(m.events, 2):
            lines.append(f"(assert (=> (and {sel(j)} (not {sel(k)})) (< {rank(j)} {rank(k)})))")

        lines.append(f"; model {m.name}: clocks, offset {problem.offsets[m.name]}")
        for j, k in itertools.permutations(m.events, 2):
            cj, ck = f"(clock {smt_symbol(j)})", f"(clock {smt_symbol(k)})"
            lines.append(
                f"(assert (=> (and {sel(j)} {sel(k)} (= (- {rank(k)} {rank(j)}) 1))"
                f" (= {ck} (+ {cj} {m.duration(j)}))))"
            )
        for e in m.events:
            lines.append(
                f"(assert (=> (and {sel(e)} (= {rank(e)} 1)) (= (clock {smt_symbol(e)}) {problem.offsets[m.name]})))"
            )

        lines.append(f"; model {m.name}: event scores")
        for e in m.events:
            sym = smt_symbol(e)
            lines.append(f"(assert (= (score {sym}) (ite {sel(e)} {m.priority(e)} 0)))")
            terms.append(f"(score {sym})")

    attrs = problem.attributes
    pen_lines = []
    for j, k in itertools.permutations(problem.events, 2):
        if j.model == k.model:
            continue
        w = label_conflict_weight(attrs[j].labels, attrs[k].labels, problem.gamma)
        if not w:
            continue
        sj, sk = smt_symbol(j), smt_symbol(k)
        cj, ck = f"(clock {sj})", f"(clock {sk})"
        pen_lines.append(
            f"(assert (= (Score {sj} {sk}) (ite (and {sel(j)} {sel(k)} (<= {cj} {ck})"
            f" (< {ck} (+ {cj} {attrs[j].duration}))) {num(w)} 0)))"
        )
        terms.append(f"(Score {sj} {sk})")
    if pen_lines:
        lines.append("; cross-model overlap penalties (pairs without conflicting labels score 0)")
        lines += pen_lines

    total = "0" if not terms else terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"
    lines.append(f"(assert (= objective {total}))")
    lines += ["(maximize objective)", "(check-sat)", "(get-objectives)"]
    queries = []
    for m in problem.models:
        for e in m.events:
            sym = smt_symbol(e)
            queries += [f"(sel {sym})", f"(s_{m.name} {sym})", f"(clock {sym})"]
    if queries:
        lines.append("(get-value (" + " ".join(queries) + "))")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Output parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()";]+)|(;[^\n]*))')


def parse_sexprs(text: str) -> list:
    """Parse a sequence of s-expressions into nested lists of str tokens."""
    stack: list[list] = [[]]
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ModelParseError(f"cannot tokenize solver output near {text[pos:pos + 20]!r}")
        pos = m.end()
        lpar, rpar, string, quoted, atom, _comment = m.groups()
        if lpar:
            stack.append([])
        elif rpar:
            if len(stack) == 1:
                raise ModelParseError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        elif string or quoted or atom:
            stack[-1].append(string or quoted or atom)
    if len(stack) != 1:
        raise ModelParseError("unbalanced '(' in solver output")
    return stack[0]


def _int_value(v) -> int:
    try:
        if isinstance(v, list) and len(v) == 2 and v[0] == "-":
            return -int(v[1])
        return int(v)
    except (TypeError, ValueError):
        raise ModelParseError(f"expected an integer, got {v!r}") from None


def _bool_value(v) -> bool:
    if v in ("true", "false"):
        return v == "true"
    raise ModelParseError(f"expected a boolean, got {v!r}")


def _term(t) -> str:
    return "(" + " ".join(_term(x) for x in t) + ")" if isinstance(t, list) else t


def parse_solver_output(text: str) -> tuple[str, int | None, dict[str, object]]:
    """Return ``(status, objective, values)`` where ``values`` maps terms such
    as ``"(sel A_e0)"`` to their raw values."""
    exprs = parse_sexprs(text)
    status = None
    objective = None
    values: dict[str, object] = {}
    for ex in exprs:
        if isinstance(ex, str):
            if ex in ("sat", "unsat", "unknown") and status is None:
                status = ex
            continue
        if ex and ex[0] == "error":
            if status == "sat":
                raise ModelParseError("solver error: " + " ".join(map(_term, ex[1:])))
            continue
        if ex and ex[0] == "objectives":
            for entry in ex[1:]:
                if isinstance(entry, list) and len(entry) == 2 and entry[0] == "objective":
                    objective = _int_value(entry[1])
            continue
        if all(isinstance(p, list) and len(p) == 2 for p in ex):
            for term, value in ex:
                values[_term(term)] = value
    if status is None:
        raise ModelParseError("solver output has no sat/unsat status")
    return status, objective, values


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------

def run_solver(text: str, solver_command: str, timeout: float | None = None) -> str:
    argv = shlex.split(solver_command)
    if not argv:
        raise SolverUnavailable("empty solver command")
    try:
        proc = subprocess.run(argv, input=text, capture_output=True, text=True, timeout=timeout)
    except (FileNotFoundError, PermissionError, NotADirectoryError) as exc:
        raise SolverUnavailable(f"cannot start solver {argv[0]!r}: {exc}") from None
    except subprocess.TimeoutExpired:
        raise SolverUnavailable(f"solver {argv[0]!r} timed out after {timeout}s") from None
    if not proc.stdout.strip():
        raise SolverUnavailable(f"solver {argv[0]!r} produced no output (exit {proc.returncode}): {proc.stderr.strip()}")
    return proc.stdout


def run_external(problem: CompositionProblem, solver_command: str = DEFAULT_SOLVER_CMD, timeout: float | None = None) -> ScheduledTrace:
    """Solve via an external optimising SMT solver and revalidate its answer.

    Nothing the solver returns is trusted: traces, ranks and clocks are
    checked locally and the objective is recomputed and compared with the
    reported optimum.
    """
    status, reported, values = parse_solver_output(run_solver(emit_smtlib(problem), solver_command, timeout))
    if status == "unsat":
        raise SolverReportedUnsat("solver reported unsat")
    if status != "sat":
        raise ModelParseError(f"solver answered {status}")
    if reported is None:
        raise ModelParseError("solver output has no objective value")

    def value(term):
        try:
            return values[term]
        except KeyError:
            raise ModelParseError(f"solver output lacks a value for {term}") from None

    selection, ranks, solver_clocks = {}, {}, {}
    for m in problem.models:
        chosen = set()
        rank = {}
        for e in m.events:
            sym = smt_symbol(e)
            if _bool_value(value(f"(sel {sym})")):
                chosen.add(e)
                solver_clocks[e] = _int_value(value(f"(clock {sym})"))
            rank[e] = _int_value(value(f"(s_{m.name} {sym})"))
        selection[m.name] = frozenset(chosen)
        ranks[m.name] = RankFunction(m.name, rank)

    try:
        schedule = build_schedule(problem, selection, ranks)
    except InvalidSchedule as exc:
        raise ObjectiveMismatch(f"solver model fails revalidation: {exc}") from exc
    if dict(schedule.clocks.clock) != solver_clocks:
        raise ObjectiveMismatch("solver clocks differ from the locally derived ones")
    if schedule.total != reported:
        raise ObjectiveMismatch(f"solver reported {reported}, local recomputation gives {schedule.total}")
    return schedule
