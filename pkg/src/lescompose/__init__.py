"""Optimal composition of dephased labelled event structures."""

from .configurations import (
    Configuration,
    Trace,
    enumerate_traces,
    is_configuration,
    is_conflict_free,
    is_downward_closed,
    is_maximal_conf_smt,
    is_trace,
)
from .errors import *  # noqa: F401,F403
from .fileformat import format_model, load_model, load_problem, parse_model_file, parse_scenario_file
from .les import (
    EventAttributes,
    EventId,
    LabelledEventStructure,
    ValidationReport,
    close_causality,
    derive_concurrency,
    immediate_predecessors,
    local_configuration,
    propagate_conflicts,
    validate_les,
)
from .problem import CompositionProblem, ScheduledTrace, check_schedule
from .render import render_gantt, render_machine, render_table
from .schedule import ClockAssignment, RankFunction, assign_clocks, linear_extensions, validate_rank
from .scoring import (
    LabelConflictSet,
    ObjectiveBreakdown,
    event_score,
    label_conflict_weight,
    objective,
    overlap_penalty,
    pair_score,
)
from .smt import emit_smtlib, run_external
from .solver import solve_native, solve_oracle
from .verify import check_maximality_equivalence, emit_equivalence_smt

__version__ = "0.1.0"
