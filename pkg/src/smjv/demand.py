"""Resource-demand expressions.

A demand combines resources with three operators, from tightest to loosest
binding::

    a AND b        both resources at the same time
    a OR b         either resource
    a SEQ(t) b     a first, then b at least t minutes later

Operators are left-associative and there are no parentheses, so a ``SEQ``
can never sit beneath an ``AND``/``OR``.  Every demand therefore has the
shape ``stage SEQ(t1) stage SEQ(t2) ...`` where each stage is an AND/OR
combination of resources.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .schedule import AvailabilityMap


class DemandError(ValueError):
    pass


@dataclass(frozen=True)
class Resource:
    name: str


@dataclass(frozen=True)
class And:
    left: "Demand"
    right: "Demand"


@dataclass(frozen=True)
class Or:
    left: "Demand"
    right: "Demand"


@dataclass(frozen=True)
class Seq:
    left: "Demand"
    delay: int
    right: "Demand"

    def __post_init__(self):
        if self.delay < 0:
            raise DemandError(f"negative delay {self.delay}")


Demand = Union[Resource, And, Or, Seq]

_PREC = {"SEQ": 1, "OR": 2, "AND": 3}
_KEYWORDS = frozenset(_PREC)

_TOKEN_RE = re.compile(
    r"\s*(?:SEQ\s*\(\s*(?P<delay>-?\d+)\s*\)|(?P<word>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad = text[pos:].lstrip()
            col = len(text) - len(bad)
            raise DemandError(f"unexpected {bad[:1]!r} at column {col + 1}")
        if m.group("delay") is not None:
            delay = int(m.group("delay"))
            if delay < 0:
                raise DemandError(
                    f"negative delay {delay} at column {m.start('delay') + 1}"
                )
            tokens.append(("SEQ", delay, m.start()))
        else:
            word = m.group("word")
            if word == "SEQ":
                raise DemandError(f"SEQ needs a delay at column {m.start('word') + 1}")
            kind = word if word in _KEYWORDS else "NAME"
            tokens.append((kind, word, m.start("word")))
        pos = m.end()
    return tokens


def parse_demand(text: str) -> Demand:
    """Parse demand text honouring AND > OR > SEQ(t) precedence."""
    tokens = _tokenize(text)
    if not tokens:
        raise DemandError("empty demand expression")
    pos = 0

    def operand():
        nonlocal pos
        if pos >= len(tokens):
            raise DemandError("expression ends after an operator")
        kind, value, offset = tokens[pos]
        if kind != "NAME":
            raise DemandError(f"expected a resource at column {offset + 1}, got {kind}")
        pos += 1
        return Resource(value)

    def climb(min_prec):
        nonlocal pos
        left = operand()
        while pos < len(tokens):
            kind, value, offset = tokens[pos]
            if kind == "NAME":
                raise DemandError(f"expected an operator at column {offset + 1}")
            prec = _PREC[kind]
            if prec < min_prec:
                break
            pos += 1
            right = climb(prec + 1)
            if kind == "AND":
                left = And(left, right)
            elif kind == "OR":
                left = Or(left, right)
            else:
                left = Seq(left, value, right)
        return left

    return climb(1)


def _prec(d: Demand) -> int:
    if isinstance(d, Seq):
        return 1
    if isinstance(d, Or):
        return 2
    if isinstance(d, And):
        return 3
    return 4


def format_demand(demand: Demand) -> str:
    """Canonical text for *demand*.

    Raises :class:`DemandError` for trees the parenthesis-free grammar
    cannot express (for example a right-nested ``AND``).
    """
    if isinstance(demand, Resource):
        return demand.name
    prec = _prec(demand)
    if _prec(demand.left) < prec or _prec(demand.right) <= prec:
        raise DemandError("demand tree is not expressible without parentheses")
    if isinstance(demand, Seq):
        op = f"SEQ({demand.delay})"
    else:
        op = "AND" if isinstance(demand, And) else "OR"
    return f"{format_demand(demand.left)} {op} {format_demand(demand.right)}"


def resources(demand: Demand) -> list[str]:
    """Resource names in first-appearance order, without repeats."""
    out: list[str] = []

    def walk(d):
        if isinstance(d, Resource):
            if d.name not in out:
                out.append(d.name)
        else:
            walk(d.left)
            walk(d.right)

    walk(demand)
    return out


def stages(demand: Demand) -> list[tuple[Demand, int]]:
    """Split a demand into ``(stage, delay-before-stage)`` pairs.

    >>> stages(parse_demand("a SEQ(0) b SEQ(5) c"))
    [(Resource(name='a'), 0), (Resource(name='b'), 0), (Resource(name='c'), 5)]
    """
    if isinstance(demand, Seq):
        if isinstance(demand.right, Seq):
            raise DemandError("SEQ on the right of SEQ is not in normal form")
        return stages(demand.left) + [(_check_stage(demand.right), demand.delay)]
    return [(_check_stage(demand), 0)]


def _check_stage(d: Demand) -> Demand:
    if isinstance(d, Seq):
        raise DemandError("SEQ nested beneath AND/OR")
    if isinstance(d, (And, Or)):
        _check_stage(d.left)
        _check_stage(d.right)
    return d


def holds(demand: Demand, schedule: AvailabilityMap, minute: int) -> bool:
    """Whether an AND/OR demand is satisfied by the resources free at *minute*."""
    if isinstance(demand, Resource):
        return schedule.is_available(demand.name, minute)
    if isinstance(demand, And):
        return holds(demand.left, schedule, minute) and holds(demand.right, schedule, minute)
    if isinstance(demand, Or):
        return holds(demand.left, schedule, minute) or holds(demand.right, schedule, minute)
    raise DemandError("SEQ nested beneath AND/OR")


def earliest_enable(
    demand: Demand, schedule: AvailabilityMap, start: int = 0
) -> Optional[int]:
    """Minute at which the last stage of *demand* can first be satisfied.

    A plain minute-by-minute scan: the first stage needs a minute ``>= start``
    at which it holds; each later stage needs a minute at least
    ``max(delay, 1)`` after the previous stage was met.  Returns ``None`` when
    that never happens before the schedule runs out.
    """
    last = schedule.horizon()

    def first_from(d, m):
        while m <= last:
            if holds(d, schedule, m):
                return m
            m += 1
        return None

    def solve(d, m):
        if isinstance(d, Seq):
            prev = solve(d.left, m)
            if prev is None:
                return None
            return first_from(d.right, prev + max(d.delay, 1))
        return first_from(d, m)

    return solve(demand, start)


class DemandMap(dict):
    """Ordered procedure -> :data:`Demand` mapping."""


_MAP_LINE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$")


def parse_demand_map(text: str) -> DemandMap:
    dmap = DemandMap()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MAP_LINE_RE.match(line)
        if m is None:
            raise DemandError(f"line {lineno}: expected 'procedure: demand'")
        name, body = m.group(1), m.group(2)
        if name in dmap:
            raise DemandError(f"line {lineno}: duplicate procedure {name!r}")
        try:
            dmap[name] = parse_demand(body)
        except DemandError as exc:
            raise DemandError(f"line {lineno}: {exc}") from None
    return dmap


def format_demand_map(dmap) -> str:
    return "".join(f"{p}: {format_demand(d)}\n" for p, d in dmap.items())


def load_demand_map(path) -> DemandMap:
    with open(path, encoding="utf-8") as fh:
        return parse_demand_map(fh.read())
