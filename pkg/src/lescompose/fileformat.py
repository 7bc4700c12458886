"""
Line-oriented model (``.les``) and scenario (``.scn``) files.

Model file::

    model A
    event e0 priority=1 duration=1
    event e2 priority=5 duration=3 labels=pro1,ma1
    edge e0 e2          # immediate causality, source then target
    conflict e2 e3      # direct conflict

Scenario file::

    offset C 4
    gamma ma1 mc1               # weight defaults to -1000
    gamma ma2 mb2 weight=-50

``#`` starts a comment anywhere on a line. Every diagnostic carries the
1-based line and column.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    CycleDetected,
    LesSyntaxError,
    NonNegativeWeight,
    SelfConflict,
    UnknownEvent,
    UnknownModel,
)
from .les import EventAttributes, EventId, LabelledEventStructure
from .problem import LOCAL_ID, MODEL_NAME, CompositionProblem
from .scoring import DEFAULT_WEIGHT, LabelConflictSet

log = logging.getLogger(__name__)

_NAT = re.compile(r"\d+\Z")
_INT = re.compile(r"-?\d+\Z")
_LABEL = re.compile(r"[^\s,#]+\Z")


def _statements(text: str) -> Iterator[tuple[int, list[tuple[str, int]]]]:
    """Yield ``(line, [(token, column), ...])`` for each non-empty line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if tokens:
            yield lineno, tokens


def _expect_args(tokens, n: int, lineno: int, usage: str) -> None:
    if len(tokens) - 1 < n:
        col = tokens[-1][1] + len(tokens[-1][0])
        raise LesSyntaxError(f"expected: {usage}", lineno, col)


def _located(exc_type, event, lineno, col, message):
    exc = exc_type(event, f"line {lineno}, column {col}: {message}")
    exc.line, exc.column = lineno, col
    return exc


def parse_model_file(text: str) -> LabelledEventStructure:
    name = None
    attrs: dict[str, EventAttributes] = {}
    edges: dict[tuple[str, str], tuple[int, int]] = {}
    conflicts: dict[frozenset, tuple[int, int]] = {}

    for lineno, tokens in _statements(text):
        kw, kw_col = tokens[0]
        if name is None and kw != "model":
            raise LesSyntaxError("file must start with 'model <name>'", lineno, kw_col)
        if kw == "model":
            if name is not None:
                raise LesSyntaxError("only one 'model' statement is allowed", lineno, kw_col)
            _expect_args(tokens, 1, lineno, "model <name>")
            if len(tokens) > 2:
                raise LesSyntaxError("unexpected token", lineno, tokens[2][1])
            name, col = tokens[1]
            if not MODEL_NAME.match(name):
                raise LesSyntaxError(f"invalid model name {name!r}", lineno, col)
        elif kw == "event":
            _expect_args(tokens, 1, lineno, "event <id> priority=<nat> duration=<nat> [labels=...]")
            local, col = tokens[1]
            if not LOCAL_ID.match(local):
                raise LesSyntaxError(f"invalid event id {local!r}", lineno, col)
            if local in attrs:
                raise LesSyntaxError(f"event {local} declared twice", lineno, col)
            opts: dict[str, str] = {}
            for tok, tcol in tokens[2:]:
                key, eq, value = tok.partition("=")
                if not eq or key not in ("priority", "duration", "labels"):
                    raise LesSyntaxError(f"unexpected token {tok!r}", lineno, tcol)
                if key in opts:
                    raise LesSyntaxError(f"{key} given twice", lineno, tcol)
                if key != "labels" and not _NAT.match(value):
                    raise LesSyntaxError(f"{key} must be a natural number, got {value!r}", lineno, tcol + len(key) + 1)
                if key == "labels" and not all(_LABEL.match(v) for v in value.split(",")):
                    raise LesSyntaxError(f"malformed label list {value!r}", lineno, tcol + len(key) + 1)
                opts[key] = value
            for key in ("priority", "duration"):
                if key not in opts:
                    raise LesSyntaxError(f"event {local} lacks {key}=", lineno, col)
            labels = frozenset(opts["labels"].split(",")) if "labels" in opts else frozenset()
            attrs[local] = EventAttributes(labels, int(opts["priority"]), int(opts["duration"]))
        elif kw in ("edge", "conflict"):
            _expect_args(tokens, 2, lineno, f"{kw} <id> <id>")
            if len(tokens) > 3:
                raise LesSyntaxError("unexpected token", lineno, tokens[3][1])
            (a, acol), (b, bcol) = tokens[1], tokens[2]
            for x, xcol in ((a, acol), (b, bcol)):
                if x not in attrs:
                    raise _located(UnknownEvent, EventId(name, x), lineno, xcol, f"event {x} used before declaration")
            if kw == "edge":
                if a == b:
                    raise _located(CycleDetected, (EventId(name, a),) * 2, lineno, acol, f"self-loop on {a}")
                edges.setdefault((a, b), (lineno, acol))
            else:
                if a == b:
                    raise _located(SelfConflict, EventId(name, a), lineno, acol, f"event {a} conflicts with itself")
                conflicts.setdefault(frozenset((a, b)), (lineno, acol))
        else:
            raise LesSyntaxError(f"unknown statement {kw!r}", lineno, kw_col)

    if name is None:
        raise LesSyntaxError("empty model file; expected 'model <name>'", 1, 1)

    try:
        return LabelledEventStructure.build(name, attrs, edges, [tuple(sorted(p)) for p in conflicts])
    except CycleDetected as exc:
        cyc = [e.local for e in exc.cycle]
        where = min(
            (edges[p] for i in range(len(cyc) - 1) for p in ((cyc[i], cyc[i + 1]), (cyc[i + 1], cyc[i])) if p in edges),
            default=(None, None),
        )
        raise _located(CycleDetected, exc.cycle, *where, "causality cycle " + " -> ".join(cyc)) from None
    except SelfConflict as exc:
        local = exc.event.local
        where = min((pos for p, pos in conflicts.items() if local in p), default=min(conflicts.values()))
        raise _located(
            SelfConflict, exc.event, *where, f"conflict propagation makes {local} conflict with itself"
        ) from None


def format_model(les: LabelledEventStructure) -> str:
    """Canonical text for ``les``; parses back to an equal structure."""
    lines = [f"model {les.name}"]
    for e in les.events:
        a = les.attributes[e]
        line = f"event {e.local} priority={a.priority} duration={a.duration}"
        if a.labels:
            line += " labels=" + ",".join(sorted(a.labels))
        lines.append(line)
    for a, b in sorted(les.immediate_causality):
        lines.append(f"edge {a.local} {b.local}")
    for p in sorted(les.direct_conflicts, key=sorted):
        a, b = sorted(p)
        lines.append(f"conflict {a.local} {b.local}")
    return "\n".join(lines) + "\n"


def parse_scenario_file(text: str, models: Sequence[LabelledEventStructure]) -> CompositionProblem:
    names = {m.name for m in models}
    known_labels = frozenset().union(*(m.labels(e) for m in models for e in m.events))
    offsets: dict[str, int] = {}
    weights: dict[frozenset, int] = {}

    for lineno, tokens in _statements(text):
        kw, kw_col = tokens[0]
        if kw == "offset":
            _expect_args(tokens, 2, lineno, "offset <model> <nat>")
            if len(tokens) > 3:
                raise LesSyntaxError("unexpected token", lineno, tokens[3][1])
            (model, mcol), (value, vcol) = tokens[1], tokens[2]
            if model not in names:
                exc = UnknownModel(model, f"line {lineno}, column {mcol}: unknown model {model}")
                exc.line, exc.column = lineno, mcol
                raise exc
            if not _NAT.match(value):
                raise LesSyntaxError(f"offset must be a natural number, got {value!r}", lineno, vcol)
            if model in offsets:
                raise LesSyntaxError(f"offset for {model} given twice", lineno, kw_col)
            offsets[model] = int(value)
        elif kw == "gamma":
            _expect_args(tokens, 2, lineno, "gamma <label> <label> [weight=<negative int>]")
            (a, acol), (b, bcol) = tokens[1], tokens[2]
            for lab, col in ((a, acol), (b, bcol)):
                if not _LABEL.match(lab):
                    raise LesSyntaxError(f"malformed label {lab!r}", lineno, col)
                if lab not in known_labels:
                    log.warning("line %d: label %s does not occur in any model", lineno, lab)
            weight = DEFAULT_WEIGHT
            for tok, tcol in tokens[3:]:
                key, eq, value = tok.partition("=")
                if key != "weight" or not eq:
                    raise LesSyntaxError(f"unexpected token {tok!r}", lineno, tcol)
                if not _INT.match(value):
                    raise LesSyntaxError(f"weight must be an integer, got {value!r}", lineno, tcol + 7)
                weight = int(value)
                if weight >= 0:
                    raise NonNegativeWeight(f"weight must be negative, got {weight}", lineno, tcol + 7)
            key = frozenset((a, b))
            if key in weights:
                raise LesSyntaxError(f"gamma pair {a} {b} given twice", lineno, kw_col)
            weights[key] = weight
        else:
            raise LesSyntaxError(f"unknown statement {kw!r}", lineno, kw_col)

    return CompositionProblem(tuple(models), LabelConflictSet(weights), offsets)


def format_scenario(problem: CompositionProblem) -> str:
    lines = [f"offset {name} {off}" for name, off in problem.offsets.items() if off]
    for a, b, w in problem.gamma.pairs():
        lines.append(f"gamma {a} {b}" + ("" if w == DEFAULT_WEIGHT else f" weight={w}"))
    return "\n".join(lines) + ("\n" if lines else "")


def load_model(path) -> LabelledEventStructure:
    return parse_model_file(Path(path).read_text(encoding="utf-8"))


def load_problem(model_paths: Iterable, scenario_path=None) -> CompositionProblem:
    models = [load_model(p) for p in model_paths]
    text = Path(scenario_path).read_text(encoding="utf-8") if scenario_path else ""
    return parse_scenario_file(text, models)
