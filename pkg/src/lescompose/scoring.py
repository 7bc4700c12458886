"""
Objective evaluation: event priorities plus cross-model overlap penalties.

A penalty fires for the ordered pair (j, k) of selected events from
different models when k starts inside j's active span, i.e.
``0 <= clock(k) - clock(j) < duration(j)``, and their label sets hit the
label-conflict set. The window is half-open, so an event starting exactly
when another ends does not overlap it, and zero-duration events never
trigger a penalty as the first element of a pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import LesError, SameModel, UnknownEvent
from .les import EventAttributes, EventId

if TYPE_CHECKING:
    from .problem import CompositionProblem, ScheduledTrace

DEFAULT_WEIGHT = -1000


@dataclass(frozen=True)
class LabelConflictSet:
    """Symmetric set of conflicting label pairs, each with a negative weight."""

    weights: Mapping[frozenset, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for key, w in dict(self.weights).items():
            key = frozenset(key)
            if not 1 <= len(key) <= 2:
                raise LesError(f"label pair must have two members: {sorted(key)}")
            if w >= 0:
                raise LesError(f"label conflict weight must be negative, got {w}")
            clean[key] = int(w)
        object.__setattr__(self, "weights", clean)

    @classmethod
    def from_pairs(cls, pairs: Iterable, weight: int = DEFAULT_WEIGHT) -> "LabelConflictSet":
        out = {}
        for p in pairs:
            if len(p) == 3:
                a, b, w = p
            else:
                (a, b), w = p, weight
            out[frozenset((a, b))] = w
        return cls(out)

    def with_pair(self, a: str, b: str, weight: int = DEFAULT_WEIGHT) -> "LabelConflictSet":
        return LabelConflictSet({**self.weights, frozenset((a, b)): weight})

    def weight(self, a: str, b: str) -> int:
        return self.weights.get(frozenset((a, b)), 0)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset().union(*self.weights) if self.weights else frozenset()

    def pairs(self) -> list[tuple[str, str, int]]:
        rows = []
        for key, w in self.weights.items():
            a, b = sorted(key) if len(key) == 2 else (next(iter(key)),) * 2
            rows.append((a, b, w))
        return sorted(rows)

    def __len__(self) -> int:
        return len(self.weights)


def overlap_penalty(x1: int, x2: int, y: int, z: int) -> int:
    """``z`` if ``x2`` starts within ``[x1, x1 + y)``, else 0."""
    return z if 0 <= x2 - x1 < y else 0


def label_conflict_weight(labels1, labels2, gamma: LabelConflictSet) -> int:
    return sum(gamma.weight(a, b) for a in labels1 for b in labels2)


def event_score(j: EventId, selection, attributes: Mapping[EventId, EventAttributes]) -> int:
    if j not in attributes:
        raise UnknownEvent(j)
    return attributes[j].priority if j in selection else 0


def pair_score(j: EventId, k: EventId, selection, clocks, attributes, gamma: LabelConflictSet) -> int:
    if j.model == k.model:
        raise SameModel(f"{j} and {k} belong to the same model")
    for e in (j, k):
        if e not in attributes:
            raise UnknownEvent(e)
    if j not in selection or k not in selection:
        return 0
    aj, ak = attributes[j], attributes[k]
    return overlap_penalty(
        clocks[j], clocks[k], aj.duration, label_conflict_weight(aj.labels, ak.labels, gamma)
    )


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Per-event scores (every event, 0 when unselected) and the nonzero
    ordered pair penalties; pairs not listed score 0."""

    event_scores: Mapping[EventId, int]
    pair_scores: Mapping[tuple[EventId, EventId], int]
    total: int

    @property
    def priority_total(self) -> int:
        return sum(self.event_scores.values())

    @property
    def penalty_total(self) -> int:
        return sum(self.pair_scores.values())


def evaluate(problem: "CompositionProblem", selection, clocks) -> ObjectiveBreakdown:
    """Objective of a selection/clock assignment, without schedule checks."""
    attributes = problem.attributes
    selection = frozenset(selection)
    events = problem.events
    event_scores = {e: event_score(e, selection, attributes) for e in events}
    chosen = sorted(selection)
    pairs = {}
    for j in chosen:
        for k in chosen:
            if j.model == k.model:
                continue
            s = pair_score(j, k, selection, clocks, attributes, problem.gamma)
            if s:
                pairs[(j, k)] = s
    total = sum(event_scores.values()) + sum(pairs.values())
    return ObjectiveBreakdown(event_scores, pairs, total)


def objective(problem: "CompositionProblem", schedule: "ScheduledTrace") -> ObjectiveBreakdown:
    from .problem import check_schedule

    check_schedule(problem, schedule, check_breakdown=False)
    return evaluate(problem, schedule.selected, schedule.clocks)
