"""
Exact optimisers for composition problems.

Both solvers return the maximum-objective schedule; among equal objectives
the one with the smallest :attr:`ScheduledTrace.key` wins (models in
declaration order, each compared by its rank-ordered selected ids).

``solve_oracle`` is deliberately naive: brute-force subsets for traces,
all permutations for orders, every combination scored. ``solve_native``
searches the same space by branch and bound and is what the CLI uses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .configurations import enumerate_traces, is_configuration
from .errors import TooLarge
from .les import EventId, LabelledEventStructure
from .problem import CompositionProblem, ScheduledTrace, schedule_from_orders
from .schedule import selected_clocks
from .scoring import label_conflict_weight, overlap_penalty

ORACLE_LIMIT = 10**6


# --------------------------------------------------------------------------
# Oracle
# --------------------------------------------------------------------------

def _brute_traces(model: LabelledEventStructure, limit: int) -> list[frozenset[EventId]]:
    n = len(model.events)
    if 2**n > limit:
        raise TooLarge(f"model {model.name} has {n} events; subset enumeration exceeds {limit}")
    configs = []
    for mask in range(2**n):
        c = frozenset(e for i, e in enumerate(model.events) if mask >> i & 1)
        if is_configuration(c, model):
            configs.append(c)
    return [c for c in configs if not any(c < d for d in configs)]


def _brute_orders(model: LabelledEventStructure, trace: frozenset[EventId], limit: int):
    if math.factorial(len(trace)) > limit:
        raise TooLarge(f"trace of {model.name} with {len(trace)} events has too many orders")
    before = [(a, b) for a, b in model.causality if a != b and a in trace and b in trace]
    for perm in itertools.permutations(sorted(trace)):
        pos = {e: i for i, e in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in before):
            yield perm


def solve_oracle(problem: CompositionProblem, limit: int = ORACLE_LIMIT) -> ScheduledTrace:
    """Score every (trace, order) combination; raise TooLarge past ``limit``."""
    per_model = []
    for m in problem.models:
        cands = []
        for t in _brute_traces(m, limit):
            for perm in _brute_orders(m, t, limit):
                cands.append(perm)
                if len(cands) > limit:
                    raise TooLarge(f"model {m.name} has more than {limit} candidate schedules")
        per_model.append(cands)
    if math.prod(len(c) for c in per_model) > limit:
        raise TooLarge(f"more than {limit} candidate schedules")

    attrs = problem.attributes
    durations = {e: a.duration for e, a in attrs.items()}
    conflicts = {}
    for j, k in itertools.permutations(problem.events, 2):
        if j.model != k.model:
            w = label_conflict_weight(attrs[j].labels, attrs[k].labels, problem.gamma)
            if w:
                conflicts[(j, k)] = w

    best = None
    for combo in itertools.product(*per_model):
        clocks = {}
        value = 0
        for m, order in zip(problem.models, combo):
            clocks.update(selected_clocks(order, durations, problem.offsets[m.name]))
            value += sum(attrs[e].priority for e in order)
        for (j, k), w in conflicts.items():
            if j in clocks and k in clocks:
                value += overlap_penalty(clocks[j], clocks[k], durations[j], w)
        key = tuple(tuple(str(e) for e in order) for order in combo)
        if best is None or value > best[0] or (value == best[0] and key < best[1]):
            best = (value, key, combo)

    orders = {m.name: order for m, order in zip(problem.models, best[2])}
    return schedule_from_orders(problem, orders)


# --------------------------------------------------------------------------
# Branch and bound
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Candidate:
    order: tuple[EventId, ...]
    key: tuple[str, ...]
    priority: int
    # (event, clock, duration) for selected events carrying a conflicting label
    hot: tuple[tuple[EventId, int, int], ...]


def _footprint_orders(trace: frozenset[EventId], model: LabelledEventStructure, offset: int, relevant: frozenset[str]):
    """Causality-respecting orders of ``trace`` in lexicographic order,
    skipping orders that cannot be the smallest of their footprint.

    A prefix fixes its placed set, the current time, and the timing of its
    conflict-carrying events. A later prefix with the same placed set and
    the same hot timings has exactly the same completions as an earlier
    one, so every order it leads to repeats a footprint with a larger key.
    Yields ``(order, hot)``.
    """
    pending = {e: len(model.ancestors(e) & trace) for e in trace}
    succ = {e: [s for s in model.descendants(e) if s in trace] for e in trace}
    hot_labels = {e: tuple(sorted(model.labels(e) & relevant)) for e in trace}
    seen: set = set()
    prefix: list[EventId] = []
    hot: list[tuple[EventId, int, int]] = []

    def rec(t: int):
        if len(prefix) == len(trace):
            yield tuple(prefix), tuple(hot)
            return
        state = (frozenset(prefix), tuple(sorted((c, d, hot_labels[e]) for e, c, d in hot)))
        if state in seen:
            return
        seen.add(state)
        for e in sorted((e for e, k in pending.items() if k == 0), key=str):
            d = model.duration(e)
            del pending[e]
            for s in succ[e]:
                pending[s] -= 1
            prefix.append(e)
            if hot_labels[e]:
                hot.append((e, t, d))
            yield from rec(t + d)
            if hot_labels[e]:
                hot.pop()
            prefix.pop()
            for s in succ[e]:
                pending[s] += 1
            pending[e] = 0

    yield from rec(offset)


def _candidates(model: LabelledEventStructure, offset: int, relevant: frozenset[str]) -> list[_Candidate]:
    """One candidate per distinct objective footprint, keeping the smallest key.

    Two orders with the same priority sum and the same (clock, duration,
    labels) profile of conflict-carrying events score identically against
    any choice for the other models, so only the smaller key can win.
    """
    best: dict[tuple, _Candidate] = {}
    for t in enumerate_traces(model):
        priority = sum(model.priority(e) for e in t.events)
        for order, hot in _footprint_orders(t.events, model, offset, relevant):
            signature = (priority, tuple(sorted((c, d, tuple(sorted(model.labels(e) & relevant))) for e, c, d in hot)))
            key = tuple(str(e) for e in order)
            seen = best.get(signature)
            if seen is None or key < seen.key:
                best[signature] = _Candidate(order, key, priority, hot)
    return sorted(best.values(), key=lambda c: c.key)


def solve_native(problem: CompositionProblem) -> ScheduledTrace:
    """Depth-first branch and bound over one candidate per model.

    Candidates are tried in key order so the first optimum found is the
    tie-break winner. The bound adds each remaining model's best priority
    sum and assumes no further penalties, which is admissible because
    penalties are never positive.
    """
    relevant = problem.gamma.labels
    attrs = problem.attributes
    per_model = [_candidates(m, problem.offsets[m.name], relevant) for m in problem.models]
    n = len(per_model)
    rest_max = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        rest_max[i] = rest_max[i + 1] + max((c.priority for c in per_model[i]), default=0)

    weight_cache: dict[tuple[EventId, EventId], int] = {}

    def weight(j: EventId, k: EventId) -> int:
        w = weight_cache.get((j, k))
        if w is None:
            w = label_conflict_weight(attrs[j].labels, attrs[k].labels, problem.gamma)
            weight_cache[(j, k)] = weight_cache[(k, j)] = w
        return w

    pen_cache: dict[tuple[int, int, int, int], int] = {}

    def penalty(i: int, ci: int, j: int, cj: int) -> int:
        got = pen_cache.get((i, ci, j, cj))
        if got is not None:
            return got
        total = 0
        for a, ca, da in per_model[i][ci].hot:
            for b, cb, db in per_model[j][cj].hot:
                w = weight(a, b)
                if w:
                    total += overlap_penalty(ca, cb, da, w) + overlap_penalty(cb, ca, db, w)
        pen_cache[(i, ci, j, cj)] = total
        return total

    best_value: int | None = None
    best_choice: list[int] = []
    choice: list[int] = []

    def search(i: int, value: int) -> None:
        nonlocal best_value, best_choice
        if i == n:
            if best_value is None or value > best_value:
                best_value, best_choice = value, list(choice)
            return
        for ci, cand in enumerate(per_model[i]):
            v = value + cand.priority
            for j, cj in enumerate(choice):
                v += penalty(j, cj, i, ci)
            if best_value is not None and v + rest_max[i + 1] <= best_value:
                continue
            choice.append(ci)
            search(i + 1, v)
            choice.pop()

    search(0, 0)
    orders = {
        m.name: per_model[i][best_choice[i]].order for i, m in enumerate(problem.models)
    }
    return schedule_from_orders(problem, orders)


BACKENDS = ("oracle", "native", "smt")
