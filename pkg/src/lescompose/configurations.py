"""Configurations, traces (maximal configurations) and their enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import NotAConfiguration, NotATrace, UnknownEvent
from .les import EventId, LabelledEventStructure


def _sort_key(events: Iterable[EventId]) -> tuple[str, ...]:
    return tuple(sorted(str(e) for e in events))


def is_conflict_free(c, conflict, events=None) -> bool:
    c = frozenset(c)
    if events is not None:
        for e in c:
            if e not in events:
                raise UnknownEvent(e)
    return not any(p <= c for p in conflict)


def is_downward_closed(c, causality, events=None) -> bool:
    c = frozenset(c)
    if events is not None:
        for e in c:
            if e not in events:
                raise UnknownEvent(e)
    return all(a in c for a, b in causality if b in c)


def is_configuration(c, model: LabelledEventStructure) -> bool:
    c = model.check_events(c)
    return all(
        not (model.rivals(e) & c) and model.ancestors(e) <= c
        for e in c
    )


def addable(c: frozenset[EventId], model: LabelledEventStructure) -> list[EventId]:
    """Events ``z`` outside configuration ``c`` with ``c ∪ {z}`` a configuration."""
    return [
        z for z in model.events
        if z not in c and model.ancestors(z) <= c and not (model.rivals(z) & c)
    ]


def is_trace(c, model: LabelledEventStructure) -> bool:
    """A configuration no strict superset of which is a configuration.

    Single-event extensions suffice: any larger configuration contains a
    minimal extra event, and adding that one alone stays a configuration.
    """
    c = model.check_events(c)
    return is_configuration(c, model) and not addable(c, model)


def is_maximal_conf_smt(c, model: LabelledEventStructure, *, literal: bool = False) -> bool:
    """Maximality in the quantifier-free form the SMT encoding uses.

    For every unselected ``z``: some selected event conflicts with ``z``, or
    some immediate predecessor of ``z`` is unselected. With ``literal=True``
    the guard is dropped and selected ``z`` are quantified too; that variant
    is wrong and exists for regression checks only.
    """
    c = model.check_events(c)
    if not is_configuration(c, model):
        raise NotAConfiguration(f"{_fmt(c)} is not a configuration of {model.name}")
    for z in model.events:
        if z in c and not literal:
            continue
        if model.rivals(z) & c:
            continue
        if model.immediate_predecessors(z) - c:
            continue
        return False
    return True


@dataclass(frozen=True)
class Configuration:
    events: frozenset[EventId]
    model: str

    def __iter__(self):
        return iter(sorted(self.events))

    def __len__(self) -> int:
        return len(self.events)

    def __contains__(self, e) -> bool:
        return e in self.events

    def __str__(self) -> str:
        return _fmt(self.events)


class Trace(Configuration):
    pass


def make_configuration(c, model: LabelledEventStructure) -> Configuration:
    c = model.check_events(c)
    if not is_configuration(c, model):
        raise NotAConfiguration(f"{_fmt(c)} is not a configuration of {model.name}")
    return Configuration(c, model.name)


def make_trace(c, model: LabelledEventStructure) -> Trace:
    c = model.check_events(c)
    if not is_trace(c, model):
        raise NotATrace(f"{_fmt(c)} is not a trace of {model.name}")
    return Trace(c, model.name)


def _fmt(c) -> str:
    return "{" + ", ".join(e.local for e in sorted(c)) + "}"


def iter_configurations(model: LabelledEventStructure) -> Iterator[frozenset[EventId]]:
    """Every configuration exactly once, in no particular order."""
    order = model.topological_order()

    def rec(i: int, chosen: frozenset[EventId]):
        if i == len(order):
            yield chosen
            return
        e = order[i]
        if model.ancestors(e) <= chosen and not (model.rivals(e) & chosen):
            yield from rec(i + 1, chosen | {e})
        yield from rec(i + 1, chosen)

    yield from rec(0, frozenset())


def enumerate_configurations(model: LabelledEventStructure) -> list[frozenset[EventId]]:
    return sorted(iter_configurations(model), key=_sort_key)


def iter_traces(model: LabelledEventStructure) -> Iterator[frozenset[EventId]]:
    """Maximal configurations, found by include/exclude search in
    topological order.

    An enabled event may only be skipped if a later event conflicts with
    it, since otherwise nothing could ever block it and the result would
    not be maximal.
    """
    order = model.topological_order()
    position = {e: i for i, e in enumerate(order)}
    has_later_rival = [
        any(position[r] > i for r in model.rivals(e)) for i, e in enumerate(order)
    ]

    def rec(i: int, chosen: frozenset[EventId]):
        if i == len(order):
            if not addable(chosen, model):
                yield chosen
            return
        e = order[i]
        enabled = model.ancestors(e) <= chosen and not (model.rivals(e) & chosen)
        if enabled:
            yield from rec(i + 1, chosen | {e})
            if has_later_rival[i]:
                yield from rec(i + 1, chosen)
        else:
            yield from rec(i + 1, chosen)

    yield from rec(0, frozenset())


def enumerate_traces(model: LabelledEventStructure) -> list[Trace]:
    """All traces of ``model`` sorted by their qualified-id sequences."""
    found = sorted(set(iter_traces(model)), key=_sort_key)
    return [Trace(t, model.name) for t in found]
