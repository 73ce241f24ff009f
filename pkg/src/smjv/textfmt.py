"""Text format for statechart systems.

Example::

    # comments start with '#'
    var curT: int = 0
    var hemorrhage: bool = false free

    chart Stroke rank 3 {
      initial NeuAss
      state NeuAss
      //@RES: (CTscan, CT_machine AND CT_technician SEQ(10) radiologist)
      state CT {
        entry raise CTscan
        entry choose hemorrhage
      }
      NeuAss -> CT [orderCT]
      CT -> Done on Finished [true] / x = x + 1; raise Report
    }

Grammar, one construct per line:

* ``var NAME: bool|int [= LITERAL] [free]``
* ``clock timer`` turns the implicit ``curT`` clock off (an explicit timer
  chart drives it instead).
* ``chart NAME [rank N] {`` ... ``}`` holding ``initial NAME``, states and
  transitions.
* ``state NAME`` or ``state NAME {`` followed by ``entry ACTION`` lines and
  ``}``.
* ``SRC -> DST [on EVENT] [[GUARD]] [/ ACTION; ACTION ...]``; a missing guard
  means ``true``.
* Actions: ``raise E``, ``choose V``, ``record V`` (store the current
  minute), ``read "PATH"`` (schedule file), ``V = available("R")`` and
  ``V = EXPR``.
* Lines starting with ``//`` are annotations, attached to the chart, state
  or transition that follows them.
"""

from __future__ import annotations

import os
import re

from .expr import IDENT, ExprError, format_expr, parse_expr
from .model import (
    Assign,
    CheckAvailable,
    Choose,
    Raise,
    ReadSchedule,
    RecordTime,
    State,
    Statechart,
    SystemModel,
    Transition,
    VariableDecl,
)
from .schedule import AvailabilityMap, load_schedule


class FormatError(ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


_VAR_RE = re.compile(
    rf"^var\s+({IDENT})\s*:\s*(bool|int)\s*(?:=\s*(\S+))?\s*(free)?$"
)
_CHART_RE = re.compile(r"^chart\s+([A-Za-z_][A-Za-z0-9_]*)\s*(?:rank\s+(-?\d+))?\s*\{$")
_STATE_RE = re.compile(r"^state\s+([A-Za-z_][A-Za-z0-9_]*)\s*(\{)?$")
_TRANS_RE = re.compile(
    r"^([A-Za-z_][A-Za-z0-9_]*)\s*->\s*([A-Za-z_][A-Za-z0-9_]*)"
    rf"(?:\s+on\s+({IDENT}))?\s*(?:\[(.*?)\])?\s*(?:/(.*))?$"
)
_AVAILABLE_RE = re.compile(rf'^({IDENT})\s*=\s*available\(\s*"([^"]*)"\s*\)$')
_ASSIGN_RE = re.compile(rf"^({IDENT})\s*=(?!=)(.*)$")
_KEYWORD_ACTION_RE = re.compile(rf"^(raise|choose|record)\s+({IDENT})$")
_READ_RE = re.compile(r'^read\s+"([^"]*)"$')


def parse_action(text: str) -> object:
    text = text.strip()
    m = _KEYWORD_ACTION_RE.match(text)
    if m:
        kind, name = m.groups()
        return {"raise": Raise, "choose": Choose, "record": RecordTime}[kind](name)
    m = _READ_RE.match(text)
    if m:
        return ReadSchedule(m.group(1))
    m = _AVAILABLE_RE.match(text)
    if m:
        return CheckAvailable(m.group(1), m.group(2))
    m = _ASSIGN_RE.match(text)
    if m:
        return Assign(m.group(1), parse_expr(m.group(2)))
    raise ValueError(f"cannot parse action {text!r}")


def format_action(action) -> str:
    if isinstance(action, Raise):
        return f"raise {action.event}"
    if isinstance(action, Choose):
        return f"choose {action.var}"
    if isinstance(action, RecordTime):
        return f"record {action.var}"
    if isinstance(action, ReadSchedule):
        return f'read "{action.path}"'
    if isinstance(action, CheckAvailable):
        return f'{action.var} = available("{action.resource}")'
    if isinstance(action, Assign):
        return f"{action.var} = {format_expr(action.expr)}"
    raise TypeError(f"unknown action {action!r}")


def _parse_literal(text, kind, lineno):
    if kind == "bool":
        if text not in ("true", "false"):
            raise FormatError(lineno, f"expected true/false, got {text!r}")
        return text == "true"
    try:
        return int(text)
    except ValueError:
        raise FormatError(lineno, f"expected an integer, got {text!r}") from None


def _parse_transition(m, annotations, lineno):
    source, target, trigger, guard, actions = m.groups()
    try:
        guard_expr = parse_expr(guard) if guard is not None and guard.strip() else None
        acts = tuple(
            parse_action(a) for a in (actions or "").split(";") if a.strip()
        )
    except (ExprError, ValueError) as exc:
        raise FormatError(lineno, str(exc)) from None
    kwargs = {}
    if guard_expr is not None:
        kwargs["guard"] = guard_expr
    return Transition(
        source, target, trigger=trigger, actions=acts,
        annotations=tuple(annotations), **kwargs,
    )


def parse_system(text: str, base_dir=None, schedule: AvailabilityMap | None = None) -> SystemModel:
    """Parse a system document.

    If a chart contains a ``read "PATH"`` action and no *schedule* is given,
    the schedule is loaded from PATH, resolved against *base_dir*.
    """
    variables = []
    charts = []
    implicit_clock = True
    pending: list[str] = []
    chart = None  # dict under construction
    state = None  # (name, entries, annotations, lineno) inside a state block

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("//"):
            pending.append(line)
            continue

        if state is not None:
            if line == "}":
                chart["states"].append(State(state[0], tuple(state[1]), tuple(state[2])))
                state = None
            elif line.startswith("entry "):
                try:
                    state[1].append(parse_action(line[len("entry "):]))
                except (ExprError, ValueError) as exc:
                    raise FormatError(lineno, str(exc)) from None
            else:
                raise FormatError(lineno, f"expected 'entry ACTION' or '}}', got {line!r}")
            continue

        if chart is None:
            m = _VAR_RE.match(line)
            if m:
                name, kind, init, free = m.groups()
                initial = _parse_literal(init, kind, lineno) if init else (
                    False if kind == "bool" else 0
                )
                variables.append(VariableDecl(name, kind, initial, bool(free)))
                continue
            if line == "clock timer":
                implicit_clock = False
                continue
            m = _CHART_RE.match(line)
            if m:
                chart = {
                    "name": m.group(1),
                    "rank": int(m.group(2)) if m.group(2) else len(charts),
                    "initial": None,
                    "states": [],
                    "transitions": [],
                    "annotations": tuple(pending),
                    "lineno": lineno,
                }
                pending = []
                continue
            raise FormatError(lineno, f"unexpected {line!r}")

        if line == "}":
            if chart["initial"] is None:
                raise FormatError(lineno, f"chart {chart['name']} has no initial state")
            charts.append(
                Statechart(
                    chart["name"], tuple(chart["states"]), chart["initial"],
                    tuple(chart["transitions"]), chart["rank"], chart["annotations"],
                )
            )
            chart = None
            continue
        if line.startswith("initial "):
            chart["initial"] = line.split(None, 1)[1].strip()
            continue
        m = _STATE_RE.match(line)
        if m:
            if m.group(2):
                state = (m.group(1), [], list(pending), lineno)
            else:
                chart["states"].append(State(m.group(1), (), tuple(pending)))
            pending = []
            continue
        m = _TRANS_RE.match(line)
        if m:
            chart["transitions"].append(_parse_transition(m, pending, lineno))
            pending = []
            continue
        raise FormatError(lineno, f"unexpected {line!r}")

    if state is not None:
        raise FormatError(state[3], f"state {state[0]} is not closed")
    if chart is not None:
        raise FormatError(chart["lineno"], f"chart {chart['name']} is not closed")

    if schedule is None:
        paths = {
            a.path
            for c in charts
            for s in c.states
            for a in s.entry
            if isinstance(a, ReadSchedule)
        }
        if len(paths) > 1:
            raise FormatError(0, f"several schedule files referenced: {sorted(paths)}")
        if paths:
            path = paths.pop()
            if base_dir is not None and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            schedule = load_schedule(path)
    return SystemModel(tuple(variables), tuple(charts), schedule, implicit_clock)


def _format_literal(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def format_system(model: SystemModel) -> str:
    out = []
    if not model.implicit_clock:
        out.append("clock timer")
    for v in model.variables:
        line = f"var {v.name}: {v.kind} = {_format_literal(v.initial)}"
        out.append(line + (" free" if v.free else ""))
    for chart in model.charts:
        out.append("")
        out.extend(chart.annotations)
        out.append(f"chart {chart.name} rank {chart.rank} {{")
        out.append(f"  initial {chart.initial}")
        for s in chart.states:
            out.extend("  " + a for a in s.annotations)
            if s.entry:
                out.append(f"  state {s.name} {{")
                out.extend(f"    entry {format_action(a)}" for a in s.entry)
                out.append("  }")
            else:
                out.append(f"  state {s.name}")
        for t in chart.transitions:
            out.extend("  " + a for a in t.annotations)
            out.append("  " + format_transition(t))
        out.append("}")
    return "\n".join(out).lstrip("\n") + "\n"


def format_transition(t: Transition) -> str:
    line = f"{t.source} -> {t.target}"
    if t.trigger:
        line += f" on {t.trigger}"
    line += f" [{format_expr(t.guard)}]"
    if t.actions:
        line += " / " + "; ".join(format_action(a) for a in t.actions)
    return line


def load_system(path, schedule: AvailabilityMap | None = None) -> SystemModel:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_system(text, base_dir=os.path.dirname(os.path.abspath(path)), schedule=schedule)


def dump_system(model: SystemModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_system(model))
