"""Attach resource-demand annotations to guideline statecharts.

Every state whose entry actions, or transition whose actions, raise an event
that is a key of the demand map gets exactly one comment line::

    //@RES: (CTscan, CT_machine AND CT_technician SEQ(10) radiologist)

Annotations are inert: they never change how a chart executes.
"""

from __future__ import annotations

from dataclasses import replace

from .demand import Demand, DemandError, format_demand, parse_demand
from .model import RES_ANNOTATION, Statechart, raised_events


def collect_procedures(chart: Statechart) -> set[str]:
    """Names of all events raised by entry actions or transition actions."""
    events = set()
    for s in chart.states:
        events.update(raised_events(s.entry))
    for t in chart.transitions:
        events.update(raised_events(t.actions))
    return events


def format_annotation(pairs) -> str:
    body = ", ".join(f"({p}, {format_demand(d)})" for p, d in pairs)
    return f"{RES_ANNOTATION} {body}"


def parse_annotation(text: str) -> list[tuple[str, Demand]]:
    """Inverse of :func:`format_annotation`."""
    if not text.startswith(RES_ANNOTATION):
        raise DemandError(f"not a resource annotation: {text!r}")
    body = text[len(RES_ANNOTATION):]
    pairs = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch.isspace() or ch == ",":
            i += 1
            continue
        if ch != "(":
            raise DemandError(f"malformed annotation {text!r}")
        depth = 0
        j = i
        while j < len(body):
            if body[j] == "(":
                depth += 1
            elif body[j] == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        else:
            raise DemandError(f"unbalanced annotation {text!r}")
        name, sep, demand = body[i + 1:j].partition(",")
        if not sep:
            raise DemandError(f"malformed annotation entry in {text!r}")
        pairs.append((name.strip(), parse_demand(demand)))
        i = j + 1
    return pairs


def resource_annotations(annotations) -> list[tuple[str, Demand]]:
    pairs = []
    for line in annotations:
        if line.startswith(RES_ANNOTATION):
            pairs.extend(parse_annotation(line))
    return pairs


def _annotate_element(element, actions, dmap):
    matched = []
    for event in raised_events(actions):
        if event in dmap and event not in (p for p, _ in matched):
            matched.append((event, dmap[event]))
    kept = tuple(a for a in element.annotations if not a.startswith(RES_ANNOTATION))
    if matched:
        kept = kept + (format_annotation(matched),)
    if kept == element.annotations:
        return element
    return replace(element, annotations=kept)


def annotate(chart: Statechart, dmap) -> Statechart:
    """Return a copy of *chart* with ``//@RES:`` annotations for *dmap*.

    Existing resource annotations are replaced, so annotating twice gives the
    same chart as annotating once.  Raised events missing from *dmap* are
    left alone.
    """
    states = tuple(_annotate_element(s, s.entry, dmap) for s in chart.states)
    transitions = tuple(
        _annotate_element(t, t.actions, dmap) for t in chart.transitions
    )
    return replace(chart, states=states, transitions=transitions)
