from pathlib import Path

import pytest

from lescompose import load_model, load_problem

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
MODEL_FILES = [SAMPLES / "A.les", SAMPLES / "B.les", SAMPLES / "C.les"]


@pytest.fixture(scope="session")
def samples():
    return SAMPLES


@pytest.fixture(scope="session")
def m_a():
    return load_model(SAMPLES / "A.les")


@pytest.fixture(scope="session")
def m_b():
    return load_model(SAMPLES / "B.les")


@pytest.fixture(scope="session")
def m_c():
    return load_model(SAMPLES / "C.les")


@pytest.fixture(scope="session")
def base_problem():
    return load_problem(MODEL_FILES, SAMPLES / "base.scn")


@pytest.fixture(scope="session")
def dephased_problem():
    return load_problem(MODEL_FILES, SAMPLES / "dephased.scn")


# -- acceptance summary -----------------------------------------------------

_acceptance: dict[str, list] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        entry = _acceptance.setdefault(report.nodeid, [marker, report.outcome])
        if report.outcome != "passed":
            entry[1] = report.outcome


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(_acceptance.values(), key=lambda v: v[0][0]):
        verdict = {"passed": "PASS", "skipped": "SKIP"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")


# -- external solver ---------------------------------------------------------

def solver_command():
    """Command line for an optimising SMT solver, or None when none is configured."""
    import os
    import shutil

    cmd = os.environ.get("LESCOMPOSE_SOLVER_CMD")
    if cmd:
        return cmd
    return "z3 -in -smt2" if shutil.which("z3") else None


@pytest.fixture(scope="session")
def smt_cmd():
    cmd = solver_command()
    if cmd is None:
        pytest.skip("no external SMT solver configured (set LESCOMPOSE_SOLVER_CMD or install z3)")
    return cmd
