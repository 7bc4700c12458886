"""Composition problems and the schedules that solve them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .configurations import Trace, is_trace
from .errors import InvalidSchedule, LesError, UnknownModel
from .les import EventAttributes, EventId, LabelledEventStructure
from .schedule import (
    ClockAssignment,
    RankFunction,
    assign_clocks,
    merge_clocks,
    rank_from_order,
    validate_rank,
)
from .scoring import LabelConflictSet, ObjectiveBreakdown, evaluate

MODEL_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
LOCAL_ID = re.compile(r"[A-Za-z0-9_]+\Z")
RESERVED_SYMBOLS = frozenset({"sel", "clock", "Score", "score", "objective", "Event"})


def smt_symbol(e: EventId) -> str:
    return f"{e.model}_{e.local}"


@dataclass(frozen=True)
class CompositionProblem:
    models: tuple[LabelledEventStructure, ...] = ()
    gamma: LabelConflictSet = field(default_factory=LabelConflictSet)
    offsets: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        models = tuple(self.models)
        object.__setattr__(self, "models", models)
        names = [m.name for m in models]
        if len(set(names)) != len(names):
            raise LesError("model names must be unique")
        offsets = {}
        for name, off in dict(self.offsets).items():
            if name not in names:
                raise UnknownModel(name)
            if off < 0:
                raise LesError(f"offset of {name} must be a natural number, got {off}")
            offsets[name] = int(off)
        object.__setattr__(self, "offsets", {n: offsets.get(n, 0) for n in names})

        symbols = {f"s_{n}" for n in names} | RESERVED_SYMBOLS
        for m in models:
            if not MODEL_NAME.match(m.name):
                raise LesError(f"invalid model name {m.name!r}")
            for e in m.events:
                if not LOCAL_ID.match(e.local):
                    raise LesError(f"invalid event id {e.local!r} in model {m.name}")
                sym = smt_symbol(e)
                if sym in symbols:
                    raise LesError(f"event {e} clashes with SMT symbol {sym}")
                symbols.add(sym)

    @property
    def events(self) -> list[EventId]:
        return [e for m in self.models for e in m.events]

    @property
    def attributes(self) -> dict[EventId, EventAttributes]:
        out = {}
        for m in self.models:
            out.update(m.attributes)
        return out

    def model(self, name: str) -> LabelledEventStructure:
        for m in self.models:
            if m.name == name:
                return m
        raise UnknownModel(name)

    def with_offsets(self, **offsets: int) -> "CompositionProblem":
        return CompositionProblem(self.models, self.gamma, {**self.offsets, **offsets})


@dataclass(frozen=True)
class ScheduledTrace:
    """A complete answer: per-model trace and rank function, start clocks of
    selected events, and the objective breakdown."""

    problem: CompositionProblem = field(repr=False)
    selection: Mapping[str, Trace]
    ranks: Mapping[str, RankFunction]
    clocks: ClockAssignment
    breakdown: ObjectiveBreakdown

    @property
    def selected(self) -> frozenset[EventId]:
        return frozenset().union(*(t.events for t in self.selection.values())) if self.selection else frozenset()

    @property
    def total(self) -> int:
        return self.breakdown.total

    def order(self, model: str) -> list[EventId]:
        return self.ranks[model].selected_order(self.selection[model].events)

    @property
    def key(self) -> tuple[tuple[str, ...], ...]:
        """Tie-break key: per model in declaration order, the rank-ordered
        qualified ids of its selected events. Smaller wins."""
        return tuple(tuple(str(e) for e in self.order(m.name)) for m in self.problem.models)


def build_schedule(problem: CompositionProblem, selection: Mapping[str, object], ranks: Mapping[str, RankFunction]) -> ScheduledTrace:
    """Assemble and fully validate a schedule from selections and ranks."""
    traces = {}
    clock_parts = []
    for m in problem.models:
        if m.name not in selection or m.name not in ranks:
            raise InvalidSchedule(f"no selection or ranks for model {m.name}")
        sel = frozenset(selection[m.name])
        try:
            ok = is_trace(sel, m)
        except LesError as exc:
            raise InvalidSchedule(str(exc)) from exc
        if not ok:
            raise InvalidSchedule(f"selection of {m.name} is not a trace")
        rank = ranks[m.name]
        if set(rank.rank) != set(m.events) or not validate_rank(rank, sel, m.causality):
            raise InvalidSchedule(f"invalid rank function for {m.name}")
        traces[m.name] = Trace(sel, m.name)
        clock_parts.append(assign_clocks(rank, sel, {e: m.duration(e) for e in m.events}, problem.offsets[m.name]))
    clocks = merge_clocks(clock_parts)
    breakdown = evaluate(problem, frozenset().union(*(t.events for t in traces.values())) if traces else (), clocks)
    return ScheduledTrace(problem, traces, {m.name: ranks[m.name] for m in problem.models}, clocks, breakdown)


def schedule_from_orders(problem: CompositionProblem, orders: Mapping[str, Sequence[EventId]]) -> ScheduledTrace:
    """Schedule whose per-model rank puts ``orders[model]`` first, the
    unselected events after it by id."""
    ranks = {m.name: rank_from_order(m, orders.get(m.name, ())) for m in problem.models}
    selection = {m.name: frozenset(orders.get(m.name, ())) for m in problem.models}
    return build_schedule(problem, selection, ranks)


def check_schedule(problem: CompositionProblem, schedule: ScheduledTrace, *, check_breakdown: bool = True) -> None:
    """Revalidate every schedule invariant from scratch; raise InvalidSchedule."""
    fresh = build_schedule(problem, {k: t.events for k, t in schedule.selection.items()}, schedule.ranks)
    if dict(fresh.clocks.clock) != dict(schedule.clocks.clock):
        raise InvalidSchedule("clock assignment does not follow ranks, durations and offsets")
    if dict(schedule.clocks.offsets) != dict(problem.offsets):
        raise InvalidSchedule("schedule offsets differ from the problem's")
    if check_breakdown and fresh.breakdown != schedule.breakdown:
        raise InvalidSchedule(
            f"objective breakdown does not match recomputation ({schedule.breakdown.total} vs {fresh.breakdown.total})"
        )
