"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL/SKIP line per criterion.
"""

import io
import itertools
import random
import time
from contextlib import redirect_stdout

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import MODEL_FILES, SAMPLES
from generators import LABELS, event_structures, problems, random_les, random_problem
from lescompose import (
    CompositionProblem,
    LabelConflictSet,
    check_maximality_equivalence,
    close_causality,
    emit_equivalence_smt,
    enumerate_traces,
    propagate_conflicts,
    run_external,
    solve_native,
    solve_oracle,
)
from lescompose.cli import main
from lescompose.problem import schedule_from_orders
from lescompose.smt import run_solver
from test_configurations import brute_traces
from test_les import matrix_closure, naive_propagation
from test_scoring import TABLE_LEFT, TABLE_RIGHT, table_objective


def golden(rows, total):
    lines = ["clock event order priority duration"]
    lines += [" ".join(map(str, r)) for r in rows]
    return "\n".join(lines + [f"objective={total}"]) + "\n"


def run_cli(scenario):
    argv = ["solve"]
    for f in MODEL_FILES:
        argv += ["--model", str(f)]
    argv += ["--scenario", str(SAMPLES / scenario), "--backend", "native", "--format", "table"]
    out = io.StringIO()
    start = time.perf_counter()
    with redirect_stdout(out):
        status = main(argv)
    return status, out.getvalue(), time.perf_counter() - start


@pytest.mark.acceptance(1, "golden schedule, all offsets zero")
def test_criterion_1_golden_left(base_problem):
    expected_total = table_objective(TABLE_LEFT, base_problem)
    assert expected_total == 20
    status, text, elapsed = run_cli("base.scn")
    assert status == 0
    assert text == golden(TABLE_LEFT, expected_total)
    assert elapsed < 1.0


@pytest.mark.acceptance(2, "golden schedule, offsets C=4 B=1")
def test_criterion_2_golden_right(dephased_problem):
    expected_total = table_objective(TABLE_RIGHT, dephased_problem)
    assert expected_total == 22
    status, text, elapsed = run_cli("dephased.scn")
    assert status == 0
    assert text == golden(TABLE_RIGHT, expected_total)
    assert elapsed < 1.0
    s = solve_native(dephased_problem)
    chosen = {e.local for e in s.selected}
    assert {"e2", "f2"} <= chosen
    b_order = [e.local for e in s.order("B")]
    assert b_order.index("g3") < b_order.index("g2")


@pytest.mark.acceptance(3, "native solver matches the brute-force oracle on 200 random problems")
def test_criterion_3_oracle_equivalence():
    rng = random.Random(3)
    start = time.perf_counter()
    for i in range(200):
        problem = random_problem(rng, max_models=3, max_events=8)
        native, oracle = solve_native(problem), solve_oracle(problem)
        assert native.total == oracle.total, i
        assert native.key == oracle.key, i
        assert dict(native.clocks.clock) == dict(oracle.clocks.clock), i
    assert time.perf_counter() - start < 60


@pytest.mark.acceptance(4, "SMT maximality test agrees with the trace definition")
def test_criterion_4_maximality(m_a, m_b, m_c):
    start = time.perf_counter()
    for model in (m_a, m_b, m_c):
        assert check_maximality_equivalence(model).passed
    rng = random.Random(4)
    for i in range(100):
        assert check_maximality_equivalence(random_les(rng, f"R{i}", max_events=10)).passed
    broken = check_maximality_equivalence(m_a, literal=True)
    assert not broken.passed
    assert broken.counterexample is not None
    assert time.perf_counter() - start < 30


@pytest.mark.acceptance(5, "structural and scoring properties")
def test_criterion_5_properties():
    quick = settings(max_examples=60, deadline=None, suppress_health_check=list(HealthCheck))

    @quick
    @given(event_structures(max_events=8))
    def relations(les):
        ca = les.causality
        # closing the closure again (minus the diagonal, which would read as self-loops) changes nothing
        assert close_causality(ca - {(x, x) for x in les.events}, les.events) == ca
        assert ca == matrix_closure(les.immediate_causality, les.events)
        assert propagate_conflicts(les.conflict, ca) == les.conflict
        assert les.conflict == naive_propagation(les.direct_conflicts, ca)
        for x, y in itertools.combinations(les.events, 2):
            kinds = [
                (x, y) in ca or (y, x) in ca,
                frozenset((x, y)) in les.conflict,
                frozenset((x, y)) in les.concurrency,
            ]
            assert sum(kinds) == 1

    @quick
    @given(problems(max_events=4), st.integers(0, 6))
    def shifting(problem, delta):
        s = solve_native(problem)
        orders = {m.name: s.order(m.name) for m in problem.models}
        moved = schedule_from_orders(problem.with_offsets(**{n: o + delta for n, o in problem.offsets.items()}), orders)
        assert moved.total == s.total
        assert all(moved.clocks[e] == s.clocks[e] + delta for e in s.selected)

    @quick
    @given(problems(max_events=4), st.sampled_from(LABELS), st.sampled_from(LABELS), st.integers(-30, -1))
    def monotone(problem, a, b, w):
        s = solve_native(problem)
        orders = {m.name: s.order(m.name) for m in problem.models}
        weights = dict(problem.gamma.weights)
        weights[frozenset((a, b))] = weights.get(frozenset((a, b)), 0) + w
        bigger = CompositionProblem(problem.models, LabelConflictSet(weights), problem.offsets)
        assert schedule_from_orders(bigger, orders).total <= s.total

    @quick
    @given(event_structures(max_events=10))
    def trace_count(les):
        assert {t.events for t in enumerate_traces(les)} == brute_traces(les)

    relations()
    shifting()
    monotone()
    trace_count()


@pytest.mark.acceptance(6, "external SMT solver agrees")
def test_criterion_6_external(base_problem, dephased_problem, m_a, m_b, m_c, smt_cmd):
    for problem, expected in ((base_problem, 20), (dephased_problem, 22)):
        s = run_external(problem, smt_cmd)
        assert s.total == expected == solve_native(problem).total
    for model in (m_a, m_b, m_c):
        assert run_solver(emit_equivalence_smt(model), smt_cmd).split()[0] == "unsat"
