"""Bounded invariant checking and scripted simulation.

Properties have the form ``A[] Chart.State imply CONDITION``: whenever
``State`` is active in ``Chart``, ``CONDITION`` must hold.  :func:`verify`
explores every reachable configuration breadth-first up to a minute horizon,
so the first violation found has a shortest counterexample.
"""

from __future__ import annotations

import json
import random
import re
from collections import defaultdict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .expr import Expr, ExprError, eval_expr, format_expr, infer_type, parse_expr
from .model import SystemModel, check_valid
from .semantics import Configuration, TickRecord, initial_transitions, run_initial, run_tick, successors

HOLDS = "holds"
VIOLATED = "violated"
RESOURCE_LIMIT = "resource-limit"

DEFAULT_MAX_STATES = 2_000_000


class PropertyError(ValueError):
    pass


@dataclass(frozen=True)
class Property:
    name: str
    chart: str
    state: str
    condition: Expr

    def __str__(self):
        return f"A[] {self.chart}.{self.state} imply {format_expr(self.condition)}"

    def violated_by(self, config: Configuration) -> bool:
        return config.is_active(self.chart, self.state) and not eval_expr(
            self.condition, config.vars
        )


_PROPERTY_RE = re.compile(
    r"^\s*(?:([A-Za-z_][A-Za-z0-9_]*)\s*:\s*)?A\s*\[\s*\]\s*"
    r"([A-Za-z_][A-Za-z0-9_]*)\.([A-Za-z_][A-Za-z0-9_]*)\s+imply\s+(.+)$"
)


def parse_property(text: str, name: Optional[str] = None) -> Property:
    """Parse ``[NAME:] A[] Chart.State imply EXPR``."""
    m = _PROPERTY_RE.match(text)
    if m is None:
        raise PropertyError(f"expected 'A[] Chart.State imply EXPR', got {text.strip()!r}")
    label, chart, state, cond = m.groups()
    try:
        condition = parse_expr(cond)
    except ExprError as exc:
        raise PropertyError(str(exc)) from None
    return Property(label or name or "P", chart, state, condition)


def parse_properties(text: str) -> list[Property]:
    props = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            props.append(parse_property(line, name=f"P{len(props) + 1}"))
        except PropertyError as exc:
            raise PropertyError(f"line {lineno}: {exc}") from None
    return props


def load_properties(path) -> list[Property]:
    with open(path, encoding="utf-8") as fh:
        return parse_properties(fh.read())


def bind_property(model: SystemModel, prop: Property) -> None:
    """Check that the property's chart, state and variables exist."""
    try:
        chart = model.chart(prop.chart)
    except KeyError:
        raise PropertyError(f"{prop.name}: unknown chart {prop.chart!r}") from None
    if prop.state not in {s.name for s in chart.states}:
        raise PropertyError(f"{prop.name}: unknown state {prop.chart}.{prop.state}")
    try:
        kind = infer_type(prop.condition, model.var_types())
    except ExprError as exc:
        raise PropertyError(f"{prop.name}: {exc}") from None
    if kind != "bool":
        raise PropertyError(f"{prop.name}: condition is not boolean")


# -- traces -----------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    minute: int
    active: tuple[tuple[str, str], ...]
    vars: tuple[tuple[str, object], ...]
    fired: tuple[tuple[str, str, str], ...] = ()
    choices: tuple[tuple[str, object], ...] = ()

    @classmethod
    def from_config(cls, config: Configuration, record: TickRecord) -> "TraceEntry":
        return cls(config.minute, config.active, config.env, record.fired, record.choices)

    def configuration(self) -> Configuration:
        return Configuration(self.active, self.vars, self.minute)


@dataclass(frozen=True)
class Trace:
    """Timed run of a system.

    Entry 0 is the initial configuration; entry k is the configuration at
    minute k together with the transitions fired and choices taken during the
    tick that produced it.
    """

    entries: tuple[TraceEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def final(self) -> TraceEntry:
        return self.entries[-1]

    def choices(self) -> list[tuple[str, object]]:
        return [c for e in self.entries for c in e.choices]

    def script(self) -> "Script":
        return Script(self.choices())

    def to_records(self) -> str:
        """One JSON object per line: minute, active, vars, fired, choices."""
        lines = []
        for e in self.entries:
            record = {
                "minute": e.minute,
                "active": {c: s for c, s in e.active},
                "vars": {n: v for n, v in e.vars},
                "fired": [f"{c}:{s}->{d}" for c, s, d in e.fired],
                "choices": [[label, value] for label, value in e.choices],
            }
            lines.append(json.dumps(record))
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_records(cls, text: str) -> "Trace":
        entries = []
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            fired = []
            for f in rec["fired"]:
                chart, _, rest = f.partition(":")
                src, _, dst = rest.partition("->")
                fired.append((chart, src, dst))
            entries.append(
                TraceEntry(
                    rec["minute"],
                    tuple(rec["active"].items()),
                    tuple(rec["vars"].items()),
                    tuple(fired),
                    tuple((label, value) for label, value in rec["choices"]),
                )
            )
        return cls(tuple(entries))

    def to_table(self) -> str:
        """Human-readable table; variables are listed only when they change."""
        rows = [("minute", "active", "fired", "choices", "changed vars")]
        previous: dict = {}
        for e in self.entries:
            now = dict(e.vars)
            changed = {k: v for k, v in now.items() if previous.get(k, object()) != v}
            previous = now
            rows.append(
                (
                    str(e.minute),
                    " ".join(f"{c}.{s}" for c, s in e.active),
                    " ".join(f"{c}:{s}->{d}" for c, s, d in e.fired),
                    " ".join(f"{k}={_fmt(v)}" for k, v in e.choices),
                    " ".join(f"{k}={_fmt(v)}" for k, v in changed.items()),
                )
            )
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        out = []
        for r in rows:
            cells = [r[i].ljust(widths[i]) for i in range(4)] + [r[4]]
            out.append("  ".join(cells).rstrip())
        return "\n".join(out) + "\n"


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


# -- choice resolution --------------------------------------------------------


class ScriptExhausted(RuntimeError):
    def __init__(self, tick, label):
        self.tick = tick
        self.label = label
        super().__init__(f"script has no value for choice {label!r} at minute {tick}")


class Script:
    """Ordered choices, consumed per label in the order they are needed.

    Labels are havoc variable names (values ``True``/``False``) or
    ``@Chart`` for a pick among several enabled transitions (value: the
    transition index within the chart).
    """

    def __init__(self, choices: Union[Sequence, Mapping] = ()):
        if isinstance(choices, Mapping):
            pairs = []
            for label, value in choices.items():
                values = value if isinstance(value, (list, tuple)) else [value]
                pairs.extend((label, v) for v in values)
            choices = pairs
        self.choices = [tuple(c) for c in choices]

    def resolver(self):
        queues = defaultdict(deque)
        for label, value in self.choices:
            queues[label].append(value)

        def decide(tick, label, options):
            if not queues[label]:
                raise ScriptExhausted(tick, label)
            value = queues[label].popleft()
            if value not in options:
                raise ValueError(
                    f"script value {value!r} for {label!r} at minute {tick} "
                    f"is not one of {list(options)}"
                )
            return value

        return decide

    def __eq__(self, other):
        return isinstance(other, Script) and self.choices == other.choices

    def __repr__(self):
        return f"Script({self.choices!r})"


def parse_script(text: str) -> Script:
    """Lines of ``label = value`` (``true``/``false`` or an integer)."""
    choices = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, sep, value = (s.strip() for s in line.partition("="))
        if not sep or not label:
            raise ValueError(f"line {lineno}: expected 'label = value'")
        if value in ("true", "false"):
            choices.append((label, value == "true"))
        else:
            try:
                choices.append((label, int(value)))
            except ValueError:
                raise ValueError(f"line {lineno}: bad value {value!r}") from None
    return Script(choices)


def format_script(script: Script) -> str:
    return "".join(f"{label} = {_fmt(value)}\n" for label, value in script.choices)


def _seeded(seed: int):
    rng = random.Random(seed)

    def decide(tick, label, options):
        return rng.choice(list(options))

    return decide


def simulate(
    model: SystemModel,
    resolver: Union[Script, Mapping, Sequence, int, None] = None,
    max_ticks: int = 60,
) -> Trace:
    """Run *model* for *max_ticks* minutes along one branch.

    *resolver* is a :class:`Script` (or anything :class:`Script` accepts), an
    integer seed for pseudo-random choices, or a callable
    ``decide(minute, label, options)``.  Choices made are recorded in
    the trace, so ``simulate(model, trace.script(), n)`` replays it.
    """
    check_valid(model)
    if resolver is None:
        resolver = Script()
    if callable(resolver):
        decide_at = resolver
    elif isinstance(resolver, int) and not isinstance(resolver, bool):
        decide_at = _seeded(resolver)
    else:
        if not isinstance(resolver, Script):
            resolver = Script(resolver)
        decide_at = resolver.resolver()

    config, record = run_initial(model, lambda label, opts: decide_at(0, label, opts))
    entries = [TraceEntry.from_config(config, record)]
    for _ in range(max_ticks):
        tick = config.minute
        config, record = run_tick(
            model, config, lambda label, opts, tick=tick: decide_at(tick, label, opts)
        )
        entries.append(TraceEntry.from_config(config, record))
    return Trace(tuple(entries))


# -- verification --------------------------------------------------------------


@dataclass
class VerificationResult:
    prop: Property
    verdict: str
    counterexample: Optional[Trace] = None
    states_explored: int = 0
    horizon: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def default_horizon(model: SystemModel) -> int:
    base = model.schedule.horizon() if model.schedule is not None else 0
    return base + 60


def _trace_to(parents, config) -> Trace:
    entries = []
    while config is not None:
        parent, record = parents[config]
        entries.append(TraceEntry.from_config(config, record))
        config = parent
    return Trace(tuple(reversed(entries)))


def verify(
    model: SystemModel,
    props: Sequence[Property],
    horizon: Optional[int] = None,
    max_states: int = DEFAULT_MAX_STATES,
    jobs: int = 1,
) -> list[VerificationResult]:
    """Check every property on all configurations reachable within *horizon* minutes.

    Exploration is breadth-first with a visited set keyed on the whole
    configuration (active states, variables, minute).  Exceeding
    *max_states* yields ``resource-limit`` for every undecided property.
    The result does not depend on *jobs*.
    """
    check_valid(model)
    for p in props:
        bind_property(model, p)
    if horizon is None:
        horizon = default_horizon(model)
    if horizon < 1:
        raise ValueError("horizon must be at least 1")

    parents: dict[Configuration, tuple] = {}
    frontier = []
    for config, record in initial_transitions(model):
        if config not in parents:
            parents[config] = (None, record)
            frontier.append(config)

    results: dict[int, VerificationResult] = {}
    pending = list(range(len(props)))
    limited = False
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        while frontier:
            for config in frontier:
                for i in list(pending):
                    if props[i].violated_by(config):
                        results[i] = VerificationResult(
                            props[i], VIOLATED, _trace_to(parents, config)
                        )
                        pending.remove(i)
            if not pending or frontier[0].minute >= horizon:
                break
            if pool is not None:
                expanded = list(pool.map(lambda c: successors(model, c), frontier))
            else:
                expanded = [successors(model, c) for c in frontier]
            nxt = []
            for config, succs in zip(frontier, expanded):
                for s, record in succs:
                    if s not in parents:
                        parents[s] = (config, record)
                        nxt.append(s)
            if len(parents) > max_states:
                limited = True
                break
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()

    out = []
    for i, p in enumerate(props):
        r = results.get(i)
        if r is None:
            r = VerificationResult(p, RESOURCE_LIMIT if limited else HOLDS)
        r.states_explored = len(parents)
        r.horizon = horizon
        out.append(r)
    return out


def format_results(results: Sequence[VerificationResult]) -> str:
    rows = [("property", "verdict", "states", "horizon", "formula")]
    for r in results:
        rows.append((r.prop.name, r.verdict, str(r.states_explored), str(r.horizon), str(r.prop)))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join([row[i].ljust(widths[i]) for i in range(4)] + [row[4]]) for row in rows]
    return "\n".join(lines) + "\n"
