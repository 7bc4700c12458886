"""Text output for schedules: the clock table, key=value records, and a Gantt view."""

from __future__ import annotations

from .problem import ScheduledTrace

TABLE_HEADER = "clock event order priority duration"


def _rows(schedule: ScheduledTrace):
    attrs = schedule.problem.attributes
    rows = []
    for name, trace in schedule.selection.items():
        rank = schedule.ranks[name]
        for e in trace.events:
            a = attrs[e]
            rows.append((schedule.clocks[e], e, rank[e], a.priority, a.duration))
    # ties on clock go by local id, then model
    rows.sort(key=lambda r: (r[0], r[1].local, r[1].model))
    return rows


def render_table(schedule: ScheduledTrace) -> str:
    lines = [TABLE_HEADER]
    for clock, e, rank, priority, duration in _rows(schedule):
        lines.append(f"{clock} {e.local} {rank} {priority} {duration}")
    lines.append(f"objective={schedule.total}")
    return "\n".join(lines) + "\n"


def render_machine(schedule: ScheduledTrace) -> str:
    """One ``key=value`` record per line with qualified ids.

    ``event`` records follow the table order; ``penalty`` records list
    every nonzero ordered pair; the closing ``objective`` record splits the
    total into priorities and penalties.
    """
    b = schedule.breakdown
    lines = []
    for clock, e, rank, priority, duration in _rows(schedule):
        lines.append(
            f"event id={e} model={e.model} clock={clock} rank={rank} "
            f"priority={priority} duration={duration} score={b.event_scores[e]}"
        )
    for (j, k), w in sorted(b.pair_scores.items()):
        lines.append(f"penalty first={j} second={k} score={w}")
    lines.append(f"objective priorities={b.priority_total} penalties={b.penalty_total} total={b.total}")
    return "\n".join(lines) + "\n"


def gantt_spans(schedule: ScheduledTrace) -> dict[str, list[tuple[str, int, int]]]:
    """Per model, ``(local id, first cell, last cell + 1)`` of each selected event."""
    out = {}
    for m in schedule.problem.models:
        spans = []
        for e in schedule.order(m.name):
            start = schedule.clocks[e]
            spans.append((e.local, start, start + m.duration(e)))
        out[m.name] = spans
    return out


def render_gantt(schedule: ScheduledTrace) -> str:
    """One lane per model, one cell per time unit.

    A cell is wide enough for the longest id plus brackets; an event of
    duration d is drawn as ``[id---]`` across d cells. Zero-duration events
    occupy no cells and are listed after the lane instead.
    """
    spans = gantt_spans(schedule)
    ids = [s[0] for lane in spans.values() for s in lane]
    width = max((len(i) for i in ids), default=1) + 2
    horizon = max((end for lane in spans.values() for _, _, end in lane), default=0)
    label_w = max((len(name) for name in spans), default=0) + 1

    axis = "".join(str(t).ljust(width) for t in range(horizon))
    lines = [" " * label_w + "|" + axis.rstrip()]
    for name, lane in spans.items():
        cells = [" "] * (horizon * width)
        instants = []
        for local, start, end in lane:
            if end == start:
                instants.append(f"{local}@{start}")
                continue
            n = (end - start) * width
            text = ("[" + local).ljust(n - 1, "-") + "]"
            cells[start * width:start * width + n] = text
        row = name.ljust(label_w) + "|" + "".join(cells).rstrip()
        if instants:
            row += "  (instant: " + ", ".join(instants) + ")"
        lines.append(row)
    lines.append(f"objective={schedule.total}")
    return "\n".join(lines) + "\n"


RENDERERS = {"table": render_table, "machine": render_machine, "gantt": render_gantt}
