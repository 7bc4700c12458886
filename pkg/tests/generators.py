"""Random instance generators shared by property and acceptance tests."""

import itertools
import math
import random

from hypothesis import assume
from hypothesis import strategies as st

from lescompose import CompositionProblem, LabelConflictSet, LabelledEventStructure, SelfConflict
from lescompose.configurations import enumerate_traces
from lescompose.schedule import iter_selected_orders

LABELS = ["a", "b", "c", "d", "e", "f"]


def random_les(rng: random.Random, name: str, max_events: int = 8, min_events: int = 1):
    """Random DAG plus random direct conflicts; retries until propagation is consistent."""
    while True:
        n = rng.randint(min_events, max_events)
        ids = [f"{name.lower()}{i}" for i in range(n)]
        pairs = list(itertools.combinations(range(n), 2))
        p_edge = rng.uniform(0.1, 0.5)
        edges = [(ids[i], ids[j]) for i, j in pairs if rng.random() < p_edge]
        conflicts = [(ids[i], ids[j]) for i, j in pairs if rng.random() < 0.15]
        events = {
            x: (rng.randint(0, 5), rng.randint(0, 3), rng.sample(LABELS, rng.randint(0, 2)))
            for x in ids
        }
        try:
            return LabelledEventStructure.build(name, events, edges, conflicts)
        except SelfConflict:
            continue


def candidate_count(model) -> int:
    return sum(len(list(iter_selected_orders(t.events, model))) for t in enumerate_traces(model))


def random_problem(rng: random.Random, max_models: int = 3, max_events: int = 8, max_candidates: int = 2000):
    while True:
        models = tuple(
            random_les(rng, name, max_events) for name in "PQR"[: rng.randint(1, max_models)]
        )
        if math.prod(candidate_count(m) for m in models) > max_candidates:
            continue
        pairs = [(a, b) for a, b in itertools.combinations(LABELS, 2) if rng.random() < 0.3]
        gamma = LabelConflictSet.from_pairs([(a, b, -rng.choice([1, 2, 5, 1000])) for a, b in pairs])
        offsets = {m.name: rng.randint(0, 4) for m in models}
        return CompositionProblem(models, gamma, offsets)


@st.composite
def event_structures(draw, name="M", max_events=8, min_events=0):
    n = draw(st.integers(min_events, max_events))
    ids = [f"{name.lower()}{i}" for i in range(n)]
    pairs = list(itertools.combinations(ids, 2))
    if pairs:
        edges = draw(st.sets(st.sampled_from(pairs), max_size=2 * n))
        conflicts = draw(st.sets(st.sampled_from(pairs), max_size=3))
    else:
        edges, conflicts = set(), set()
    events = {
        x: draw(st.tuples(st.integers(0, 5), st.integers(0, 3), st.sets(st.sampled_from(LABELS), max_size=2)))
        for x in ids
    }
    try:
        return LabelledEventStructure.build(name, events, sorted(edges), sorted(conflicts))
    except SelfConflict:
        assume(False)


@st.composite
def problems(draw, max_models=3, max_events=5):
    k = draw(st.integers(0, max_models))
    models = tuple(draw(event_structures(name, max_events)) for name in "PQR"[:k])
    pairs = draw(st.sets(st.tuples(st.sampled_from(LABELS), st.sampled_from(LABELS)), max_size=4))
    weights = {frozenset(p): draw(st.integers(-20, -1)) for p in pairs}
    offsets = {m.name: draw(st.integers(0, 5)) for m in models}
    return CompositionProblem(models, LabelConflictSet(weights), offsets)
