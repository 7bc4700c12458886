"""
Finite labelled prime event structures.

A model is given by its events, the immediate causality relation (the
covering relation of causality) and a set of direct conflicts. Full
causality, propagated conflict and concurrency are always derived here;
input files never carry them.

Relations are plain Python sets:

* ordered pairs ``(a, b)`` for causality (``a`` happens before ``b``),
* ``frozenset({a, b})`` for the symmetric conflict and concurrency
  relations.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping

from .errors import CycleDetected, LesError, SelfConflict, UnknownEvent

Pair = tuple["EventId", "EventId"]
UPair = frozenset


@dataclass(frozen=True, order=True)
class EventId:
    """An event of one model; ``str()`` gives the qualified ``model.local`` form."""

    model: str
    local: str

    def __str__(self) -> str:
        return f"{self.model}.{self.local}"

    @property
    def qualified(self) -> str:
        return str(self)


@dataclass(frozen=True)
class EventAttributes:
    labels: frozenset[str] = frozenset()
    priority: int = 0
    duration: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", frozenset(self.labels))
        if self.priority < 0:
            raise LesError(f"priority must be a natural number, got {self.priority}")
        if self.duration < 0:
            raise LesError(f"duration must be a natural number, got {self.duration}")


def _as_upair(p) -> frozenset:
    if isinstance(p, frozenset):
        return p
    a, b = p
    return frozenset((a, b))


def _upair_members(p: frozenset):
    """Return (a, b) for an unordered pair; (e, e) for a degenerate one."""
    members = sorted(p)
    return (members[0], members[-1])


# --------------------------------------------------------------------------
# Relation algebra
# --------------------------------------------------------------------------

def close_causality(g: Iterable[Pair], events: Iterable[EventId]) -> frozenset[Pair]:
    """Reflexive-transitive closure of ``g`` over ``events``.

    Raises :class:`CycleDetected` when the closure would not be
    antisymmetric, and :class:`UnknownEvent` for undeclared endpoints.
    """
    events = frozenset(events)
    succ: dict[EventId, set[EventId]] = {e: set() for e in events}
    for a, b in g:
        for x in (a, b):
            if x not in events:
                raise UnknownEvent(x)
        if a == b:
            raise CycleDetected((a, a))
        succ[a].add(b)

    sorter = TopologicalSorter({e: () for e in events})
    for a, targets in succ.items():
        for b in targets:
            sorter.add(b, a)
    try:
        order = list(sorter.static_order())
    except CycleError as exc:
        raise CycleDetected(exc.args[1]) from None

    # reverse topological sweep: reach(a) = {a} ∪ reach(successors)
    reach: dict[EventId, set[EventId]] = {}
    for a in reversed(order):
        r = {a}
        for b in succ[a]:
            r |= reach[b]
        reach[a] = r
    return frozenset((a, b) for a, r in reach.items() for b in r)


def propagate_conflicts(direct: Iterable, causality: Iterable[Pair]) -> frozenset[frozenset]:
    """Smallest symmetric conflict relation containing ``direct`` that is
    closed under ``e # e' and e' ->* e''  =>  e # e''``.

    Computed as a worklist fixpoint. Raises :class:`SelfConflict` if the
    fixpoint relates an event with itself.
    """
    succ: dict[EventId, list[EventId]] = defaultdict(list)
    for a, b in causality:
        succ[a].append(b)

    conf: set[Pair] = set()
    work: list[Pair] = []
    for p in direct:
        a, b = _upair_members(_as_upair(p))
        for q in ((a, b), (b, a)):
            if q not in conf:
                conf.add(q)
                work.append(q)
    while work:
        a, b = work.pop()
        for c in succ.get(b, ()):
            for q in ((a, c), (c, a)):
                if q not in conf:
                    conf.add(q)
                    work.append(q)

    selfs = sorted(a for a, b in conf if a == b)
    if selfs:
        raise SelfConflict(selfs[0])
    return frozenset(frozenset(q) for q in conf)


def derive_concurrency(causality, conflict, events) -> frozenset[frozenset]:
    causality = set(causality)
    conflict = {_as_upair(p) for p in conflict}
    out = set()
    for a, b in itertools.combinations(sorted(events), 2):
        if (a, b) in causality or (b, a) in causality:
            continue
        if frozenset((a, b)) in conflict:
            continue
        out.add(frozenset((a, b)))
    return frozenset(out)


def local_configuration(causality, e: EventId) -> frozenset[EventId]:
    """``↓e``: every event that causally precedes ``e``, including ``e``."""
    causality = causality if isinstance(causality, (set, frozenset)) else set(causality)
    if (e, e) not in causality:
        raise UnknownEvent(e)
    return frozenset(a for a, b in causality if b == e)


def immediate_predecessors(g, e: EventId, events=None) -> frozenset[EventId]:
    if events is not None and e not in events:
        raise UnknownEvent(e)
    return frozenset(a for a, b in g if b == e)


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: tuple = ()

    def __str__(self) -> str:
        if self.passed:
            return f"{self.name}: pass"
        return f"{self.name}: FAIL witness=({', '.join(map(str, self.witness))})"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __str__(self) -> str:
        lines = [str(c) for c in self.checks]
        lines.append("overall: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)


AXIOMS = ("reflexivity", "transitivity", "antisymmetry", "symmetry", "irreflexivity", "propagation")


def validate_relations(events, causality, conflict) -> ValidationReport:
    """Check the six event-structure axioms on arbitrary relations.

    ``conflict`` may mix ordered tuples and unordered frozensets; a
    frozenset stands for both orientations. Each failing axiom carries the
    first witness in sorted order. For propagation the witness is
    ``(ancestor, rival, descendant)``: ``rival # ancestor`` and
    ``ancestor ->* descendant`` hold, ``rival # descendant`` does not.
    """
    events = sorted(events)
    ca = set(causality)
    cf: set[Pair] = set()
    for p in conflict:
        if isinstance(p, frozenset):
            a, b = _upair_members(p)
            cf.update(((a, b), (b, a)))
        else:
            cf.add(tuple(p))
    succ: dict[EventId, list[EventId]] = defaultdict(list)
    for a, b in sorted(ca):
        succ[a].append(b)

    def first(gen):
        return next(gen, None)

    refl = first((e,) for e in events if (e, e) not in ca)
    trans = first(
        (a, b, c) for a, b in sorted(ca) for c in succ[b] if (a, c) not in ca
    )
    anti = first((a, b) for a, b in sorted(ca) if a != b and (b, a) in ca)
    sym = first((a, b) for a, b in sorted(cf) if (b, a) not in cf)
    irr = first((a,) for a, b in sorted(cf) if a == b)
    prop = first(
        (anc, rival, desc)
        for rival, anc in sorted(cf)
        for desc in succ[anc]
        if (rival, desc) not in cf
    )
    witnesses = (refl, trans, anti, sym, irr, prop)
    return ValidationReport(
        tuple(AxiomCheck(n, w is None, w or ()) for n, w in zip(AXIOMS, witnesses))
    )


# --------------------------------------------------------------------------
# The model type
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivedRelations:
    causality: frozenset[Pair]
    conflict: frozenset[frozenset]
    concurrency: frozenset[frozenset]


@dataclass(frozen=True)
class LabelledEventStructure:
    """One behavioural model: events, immediate causality, direct conflicts
    and per-event labels, priority and duration.

    Construction validates the input and computes the derived relations;
    instances are immutable afterwards.
    """

    name: str
    events: tuple[EventId, ...]
    immediate_causality: frozenset[Pair]
    direct_conflicts: frozenset[frozenset]
    attributes: Mapping[EventId, EventAttributes]

    causality: frozenset[Pair] = field(init=False, repr=False, compare=False)
    conflict: frozenset[frozenset] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("events", tuple(self.events))
        set_("immediate_causality", frozenset(tuple(p) for p in self.immediate_causality))
        set_("direct_conflicts", frozenset(_as_upair(p) for p in self.direct_conflicts))
        set_("attributes", dict(self.attributes))

        declared = set(self.events)
        if len(declared) != len(self.events):
            raise LesError(f"model {self.name}: duplicate event declaration")
        for e in self.events:
            if e.model != self.name:
                raise LesError(f"event {e} does not belong to model {self.name}")
            if e not in self.attributes:
                raise LesError(f"event {e} has no attributes")
        for e in self.attributes:
            if e not in declared:
                raise UnknownEvent(e)
        for p in self.direct_conflicts:
            for x in p:
                if x not in declared:
                    raise UnknownEvent(x)
            if len(p) == 1:
                raise SelfConflict(next(iter(p)))

        set_("causality", close_causality(self.immediate_causality, declared))
        set_("conflict", propagate_conflicts(self.direct_conflicts, self.causality))

        anc: dict[EventId, set] = {e: set() for e in self.events}
        desc: dict[EventId, set] = {e: set() for e in self.events}
        for a, b in self.causality:
            if a != b:
                anc[b].add(a)
                desc[a].add(b)
        rivals: dict[EventId, set] = {e: set() for e in self.events}
        for p in self.conflict:
            a, b = tuple(p)
            rivals[a].add(b)
            rivals[b].add(a)
        imm: dict[EventId, set] = {e: set() for e in self.events}
        for a, b in self.immediate_causality:
            imm[b].add(a)
        set_("_ancestors", {e: frozenset(s) for e, s in anc.items()})
        set_("_descendants", {e: frozenset(s) for e, s in desc.items()})
        set_("_rivals", {e: frozenset(s) for e, s in rivals.items()})
        set_("_immediate", {e: frozenset(s) for e, s in imm.items()})

    @classmethod
    def build(cls, name: str, events: Mapping[str, object], edges=(), conflicts=()):
        """Convenience constructor from local ids.

        ``events`` maps a local id to an :class:`EventAttributes` or to a
        ``(priority, duration[, labels])`` tuple.
        """
        ids = {}
        attrs = {}
        for local, spec in events.items():
            eid = EventId(name, local)
            ids[local] = eid
            if not isinstance(spec, EventAttributes):
                priority, duration, *rest = spec
                spec = EventAttributes(frozenset(rest[0]) if rest else frozenset(), priority, duration)
            attrs[eid] = spec

        def look(local):
            try:
                return ids[local]
            except KeyError:
                raise UnknownEvent(EventId(name, local)) from None

        return cls(
            name,
            tuple(ids.values()),
            frozenset((look(a), look(b)) for a, b in edges),
            frozenset(frozenset((look(a), look(b))) for a, b in conflicts),
            attrs,
        )

    # -- lookups -----------------------------------------------------------

    def event(self, local: str) -> EventId:
        eid = EventId(self.name, local)
        if eid not in self._ancestors:
            raise UnknownEvent(eid)
        return eid

    def check_events(self, events: Iterable[EventId]) -> frozenset[EventId]:
        events = frozenset(events)
        for e in sorted(events):
            if e not in self._ancestors:
                raise UnknownEvent(e)
        return events

    def ancestors(self, e: EventId) -> frozenset[EventId]:
        """Strict causal predecessors of ``e``."""
        return self._ancestors[e]

    def descendants(self, e: EventId) -> frozenset[EventId]:
        return self._descendants[e]

    def rivals(self, e: EventId) -> frozenset[EventId]:
        """Events in (propagated) conflict with ``e``."""
        return self._rivals[e]

    def immediate_predecessors(self, e: EventId) -> frozenset[EventId]:
        if e not in self._immediate:
            raise UnknownEvent(e)
        return self._immediate[e]

    def local_configuration(self, e: EventId) -> frozenset[EventId]:
        if e not in self._ancestors:
            raise UnknownEvent(e)
        return self._ancestors[e] | {e}

    def topological_order(self) -> list[EventId]:
        """Kahn's order, ties broken by event id so the result is stable."""
        remaining = {e: len(self._immediate[e]) for e in self.events}
        succ = defaultdict(list)
        for a, b in self.immediate_causality:
            succ[a].append(b)
        ready = sorted(e for e, n in remaining.items() if n == 0)
        out = []
        while ready:
            e = ready.pop(0)
            out.append(e)
            for b in succ[e]:
                remaining[b] -= 1
                if remaining[b] == 0:
                    ready.append(b)
            ready.sort()
        return out

    @property
    def concurrency(self) -> frozenset[frozenset]:
        return derive_concurrency(self.causality, self.conflict, self.events)

    @property
    def derived(self) -> DerivedRelations:
        return DerivedRelations(self.causality, self.conflict, self.concurrency)

    def priority(self, e: EventId) -> int:
        return self.attributes[e].priority

    def duration(self, e: EventId) -> int:
        return self.attributes[e].duration

    def labels(self, e: EventId) -> frozenset[str]:
        return self.attributes[e].labels

    def __len__(self) -> int:
        return len(self.events)


def validate_les(les: LabelledEventStructure) -> ValidationReport:
    """Axiom report for the structure's derived causality and conflict."""
    return validate_relations(les.events, les.causality, les.conflict)
