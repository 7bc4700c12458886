"""Rank functions (per-model total orders) and start clocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .configurations import is_trace
from .errors import InvalidRank, LesError, NotATrace, UnknownEvent
from .les import EventId, LabelledEventStructure


@dataclass(frozen=True)
class RankFunction:
    """Position of every event of one model, 1-based, selected events first."""

    model: str
    rank: Mapping[EventId, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rank", dict(self.rank))

    def __getitem__(self, e: EventId) -> int:
        return self.rank[e]

    def ordered(self) -> list[EventId]:
        return sorted(self.rank, key=self.rank.__getitem__)

    def selected_order(self, selection) -> list[EventId]:
        return [e for e in self.ordered() if e in selection]


def validate_rank(rank: RankFunction, selection, causality) -> bool:
    domain = rank.rank
    for e in selection:
        if e not in domain:
            raise UnknownEvent(e)
    for a, b in causality:
        for x in (a, b):
            if x not in domain:
                raise UnknownEvent(x)
    n = len(domain)
    values = list(domain.values())
    if len(set(values)) != n:
        return False
    if any(v < 1 or v > n for v in values):
        return False
    if any(domain[a] > domain[b] for a, b in causality):
        return False
    selection = set(selection)
    top_selected = max((domain[e] for e in selection), default=0)
    bottom_unselected = min((v for e, v in domain.items() if e not in selection), default=n + 1)
    return top_selected < bottom_unselected


def rank_from_order(model: LabelledEventStructure, order: Sequence[EventId]) -> RankFunction:
    """Ranks ``order`` as 1..k and the remaining events after it by id."""
    chosen = set(order)
    rest = sorted((e for e in model.events if e not in chosen), key=str)
    return RankFunction(model.name, {e: i for i, e in enumerate([*order, *rest], start=1)})


def iter_selected_orders(selection, model: LabelledEventStructure) -> Iterator[tuple[EventId, ...]]:
    """Causality-respecting orders of ``selection``, lexicographic by id."""
    selection = frozenset(selection)
    pending = {e: len(model.ancestors(e) & selection) for e in selection}
    succ = {e: sorted(model.descendants(e) & selection, key=str) for e in selection}
    prefix: list[EventId] = []

    def rec():
        if len(prefix) == len(selection):
            yield tuple(prefix)
            return
        ready = sorted((e for e, k in pending.items() if k == 0), key=str)
        for e in ready:
            del pending[e]
            for s in succ[e]:
                pending[s] -= 1
            prefix.append(e)
            yield from rec()
            prefix.pop()
            for s in succ[e]:
                pending[s] += 1
            pending[e] = 0

    yield from rec()


def linear_extensions(selection, model: LabelledEventStructure) -> list[RankFunction]:
    selection = model.check_events(selection)
    if not is_trace(selection, model):
        raise NotATrace(f"selection is not a trace of {model.name}")
    return [rank_from_order(model, o) for o in iter_selected_orders(selection, model)]


@dataclass(frozen=True)
class ClockAssignment:
    """Start time of every selected event, plus the per-model offsets used."""

    clock: Mapping[EventId, int] = field(default_factory=dict)
    offsets: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "clock", dict(self.clock))
        object.__setattr__(self, "offsets", dict(self.offsets))

    def __getitem__(self, e: EventId) -> int:
        return self.clock[e]

    def __contains__(self, e) -> bool:
        return e in self.clock

    def get(self, e, default=None):
        return self.clock.get(e, default)


def selected_clocks(order: Sequence[EventId], durations: Mapping[EventId, int], offset: int) -> dict[EventId, int]:
    t = offset
    out = {}
    for e in order:
        out[e] = t
        t += durations[e]
    return out


def assign_clocks(rank: RankFunction, selection, durations: Mapping[EventId, int], offset: int) -> ClockAssignment:
    """Start the rank-1 event at ``offset``; each next selected event starts
    when its predecessor in rank order ends."""
    if offset < 0:
        raise LesError(f"offset must be a natural number, got {offset}")
    selection = set(selection)
    for e in selection:
        if e not in rank.rank:
            raise UnknownEvent(e)
    ranks = sorted(rank.rank[e] for e in selection)
    if ranks != list(range(1, len(selection) + 1)):
        raise InvalidRank(f"selected events of {rank.model} do not occupy ranks 1..{len(selection)}")
    return ClockAssignment(
        selected_clocks(rank.selected_order(selection), durations, offset),
        {rank.model: offset},
    )


def merge_clocks(parts: Iterable[ClockAssignment]) -> ClockAssignment:
    clock: dict = {}
    offsets: dict = {}
    for p in parts:
        clock.update(p.clock)
        offsets.update(p.offsets)
    return ClockAssignment(clock, offsets)
