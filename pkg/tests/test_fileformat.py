import logging

import pytest
from hypothesis import given, settings

from generators import event_structures
from lescompose import (
    CycleDetected,
    EventId,
    LesSyntaxError,
    NonNegativeWeight,
    SelfConflict,
    UnknownEvent,
    UnknownModel,
    format_model,
    parse_model_file,
    parse_scenario_file,
)
from lescompose.fileformat import format_scenario


def test_sample_model_contents(m_a):
    assert m_a.name == "A"
    assert [e.local for e in m_a.events] == ["e0", "e1", "e2", "e3", "e4"]
    e2 = EventId("A", "e2")
    assert m_a.priority(e2) == 5 and m_a.duration(e2) == 3
    assert m_a.labels(e2) == {"pro1", "ma1"}
    assert m_a.labels(EventId("A", "e0")) == frozenset()
    # e4 inherits the conflict with e3 through e2
    assert EventId("A", "e3") in m_a.rivals(EventId("A", "e4"))


def test_unknown_event_carries_line_and_column():
    text = "model A\nevent e0 priority=1 duration=1\nedge e9 e0\n"
    with pytest.raises(UnknownEvent) as info:
        parse_model_file(text)
    assert (info.value.line, info.value.column) == (3, 6)
    assert info.value.event == EventId("A", "e9")


def test_cycle_reported_with_line():
    text = """model A
event a priority=1 duration=1
event b priority=1 duration=1
edge a b
edge b a
"""
    with pytest.raises(CycleDetected) as info:
        parse_model_file(text)
    assert info.value.line in (4, 5)
    assert {e.local for e in info.value.cycle} == {"a", "b"}


def test_self_loop_is_a_cycle():
    with pytest.raises(CycleDetected):
        parse_model_file("model A\nevent a priority=1 duration=1\nedge a a\n")


def test_direct_self_conflict():
    with pytest.raises(SelfConflict) as info:
        parse_model_file("model A\nevent a priority=1 duration=1\nconflict a a\n")
    assert info.value.line == 3


def test_propagated_self_conflict():
    # a and b conflict, and c follows both
    text = """model A
event a priority=1 duration=1
event b priority=1 duration=1
event c priority=1 duration=1
edge a c
edge b c
conflict a b
"""
    with pytest.raises(SelfConflict) as info:
        parse_model_file(text)
    assert info.value.event == EventId("A", "c")
    assert info.value.line == 7


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("event e0 priority=1 duration=1\n", 1, 1),
        ("model A\nevent e0 priority=x duration=1\n", 2, 19),
        ("model A\nevent e0 priority=1\n", 2, 7),
        ("model A\nevent e0 priority=1 duration=1 colour=red\n", 2, 32),
        ("model A\nfrobnicate\n", 2, 1),
        ("model A\nmodel B\n", 2, 1),
        ("model 1A\n", 1, 7),
        ("model A\nevent e0 priority=1 duration=1\nevent e0 priority=1 duration=1\n", 3, 7),
        ("model A\nevent e0 priority=1 duration=1\nedge e0\n", 3, 8),
        ("", 1, 1),
    ],
)
def test_model_syntax_errors(text, line, column):
    with pytest.raises(LesSyntaxError) as info:
        parse_model_file(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_comments_and_blank_lines():
    text = "# header\n\nmodel A   # trailing\n  event x priority=2 duration=0\n"
    m = parse_model_file(text)
    assert m.priority(EventId("A", "x")) == 2
    assert m.duration(EventId("A", "x")) == 0


@pytest.mark.parametrize("name", ["m_a", "m_b", "m_c"])
def test_round_trip_samples(name, request):
    model = request.getfixturevalue(name)
    again = parse_model_file(format_model(model))
    assert again == model
    assert format_model(again) == format_model(model)


@settings(max_examples=80, deadline=None)
@given(event_structures(max_events=8))
def test_round_trip_property(model):
    assert parse_model_file(format_model(model)) == model


def test_scenario_defaults(m_a, m_b):
    p = parse_scenario_file("", [m_a, m_b])
    assert dict(p.offsets) == {"A": 0, "B": 0}
    assert p.gamma.pairs() == []


def test_scenario_weights(m_a, m_c):
    p = parse_scenario_file("gamma ma1 mc1\ngamma ma3 mc3 weight=-7\noffset C 4\n", [m_a, m_c])
    assert p.gamma.weight("mc1", "ma1") == -1000
    assert p.gamma.weight("ma3", "mc3") == -7
    assert p.offsets["C"] == 4


def test_scenario_round_trip(dephased_problem):
    text = format_scenario(dephased_problem)
    again = parse_scenario_file(text, list(dephased_problem.models))
    assert dict(again.offsets) == dict(dephased_problem.offsets)
    assert again.gamma.pairs() == dephased_problem.gamma.pairs()


@pytest.mark.parametrize("weight", ["0", "5"])
def test_non_negative_weight(m_a, weight):
    with pytest.raises(NonNegativeWeight) as info:
        parse_scenario_file(f"gamma ma1 ma2 weight={weight}\n", [m_a])
    assert info.value.line == 1


def test_unknown_model_in_offset(m_a):
    with pytest.raises(UnknownModel) as info:
        parse_scenario_file("\noffset Z 3\n", [m_a])
    assert (info.value.line, info.value.column) == (2, 8)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("offset A\n", 1, 9),
        ("offset A -1\n", 1, 10),
        ("offset A 1\noffset A 2\n", 2, 1),
        ("gamma ma1\n", 1, 10),
        ("gamma ma1 ma2 weight=x\n", 1, 22),
        ("gamma ma1 ma2 heavy\n", 1, 15),
        ("gamma ma1 ma2\ngamma ma2 ma1\n", 2, 1),
        ("wait 3\n", 1, 1),
    ],
)
def test_scenario_syntax_errors(m_a, text, line, column):
    with pytest.raises(LesSyntaxError) as info:
        parse_scenario_file(text, [m_a])
    assert (info.value.line, info.value.column) == (line, column)


def test_unknown_label_only_warns(m_a, caplog):
    with caplog.at_level(logging.WARNING, logger="lescompose.fileformat"):
        p = parse_scenario_file("gamma ma1 nosuch\n", [m_a])
    assert "nosuch" in caplog.text
    assert p.gamma.weight("ma1", "nosuch") == -1000
