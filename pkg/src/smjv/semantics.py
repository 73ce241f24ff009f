"""Discrete-time step semantics for a system of statecharts.

One tick is one minute.  Within a tick the charts run in rank order, each
firing at most one enabled transition; the target's entry actions run right
away, so a lower-ranked chart's writes are visible to every chart ranked after
it in the same tick.  When every chart has run the minute advances and raised
events are dropped.

Nondeterminism has two sources: ``choose`` actions (boolean havoc) and
several transitions of one chart being enabled at once.  Both are resolved
through a *decide* callback ``decide(label, options) -> option``; ``label`` is
the havoc variable name, or ``"@<chart>"`` for a transition pick, in which case
the options are transition indices in declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .expr import Value, eval_expr
from .model import (
    Assign,
    CheckAvailable,
    Choose,
    Raise,
    ReadSchedule,
    RecordTime,
    SystemModel,
)

CLOCK_VAR = "curT"
HAVOC_OPTIONS = (False, True)

Decide = Callable[[str, Sequence], object]


@dataclass(frozen=True)
class Configuration:
    active: tuple[tuple[str, str], ...]
    env: tuple[tuple[str, Value], ...]
    minute: int
    events: frozenset = frozenset()

    @property
    def vars(self) -> dict[str, Value]:
        return dict(self.env)

    def state_of(self, chart: str) -> str:
        for name, state in self.active:
            if name == chart:
                return state
        raise KeyError(chart)

    def is_active(self, chart: str, state: str) -> bool:
        return (chart, state) in self.active


@dataclass(frozen=True)
class TickRecord:
    """What happened during one tick (or during initialisation)."""

    fired: tuple[tuple[str, str, str], ...] = ()
    choices: tuple[tuple[str, object], ...] = ()
    events: tuple[str, ...] = ()


class _Tick:
    def __init__(self, model: SystemModel, config: Configuration, decide: Decide):
        self.model = model
        self.env = dict(config.env)
        self.active = dict(config.active)
        self.minute = config.minute
        self.decide = decide
        self.events: list[str] = []
        self.fired: list[tuple[str, str, str]] = []
        self.choices: list[tuple[str, object]] = []

    def run_actions(self, actions):
        env = self.env
        for a in actions:
            if isinstance(a, Assign):
                env[a.var] = eval_expr(a.expr, env)
            elif isinstance(a, Raise):
                if a.event not in self.events:
                    self.events.append(a.event)
            elif isinstance(a, Choose):
                value = self.decide(a.var, HAVOC_OPTIONS)
                self.choices.append((a.var, value))
                env[a.var] = value
            elif isinstance(a, RecordTime):
                env[a.var] = self.minute
            elif isinstance(a, CheckAvailable):
                env[a.var] = self.model.schedule.is_available(a.resource, self.minute)
            elif isinstance(a, ReadSchedule):
                pass
            else:
                raise TypeError(f"unknown action {a!r}")

    def run_chart(self, chart):
        current = self.active[chart.name]
        enabled = [
            i
            for i, t in enumerate(chart.transitions)
            if t.source == current
            and (t.trigger is None or t.trigger in self.events)
            and eval_expr(t.guard, self.env)
        ]
        if not enabled:
            return
        if len(enabled) == 1:
            index = enabled[0]
        else:
            label = "@" + chart.name
            index = self.decide(label, tuple(enabled))
            self.choices.append((label, index))
        t = chart.transitions[index]
        self.run_actions(t.actions)
        self.run_actions(chart.state(t.target).entry)
        self.active[chart.name] = t.target
        self.fired.append((chart.name, t.source, t.target))

    def result(self, minute: int) -> tuple[Configuration, TickRecord]:
        config = Configuration(
            active=tuple((c.name, self.active[c.name]) for c in self.model.charts),
            env=tuple((v.name, self.env[v.name]) for v in self.model.variables),
            minute=minute,
        )
        record = TickRecord(tuple(self.fired), tuple(self.choices), tuple(self.events))
        return config, record


def _blank_configuration(model: SystemModel) -> Configuration:
    return Configuration(
        active=tuple((c.name, c.initial) for c in model.charts),
        env=tuple((v.name, v.initial) for v in model.variables),
        minute=0,
    )


def run_initial(model: SystemModel, decide: Decide) -> tuple[Configuration, TickRecord]:
    """Enter every chart's initial state and run its entry actions at minute 0."""
    tick = _Tick(model, _blank_configuration(model), decide)
    for chart in model.charts:
        tick.run_actions(chart.state(chart.initial).entry)
    return tick.result(0)


def run_tick(
    model: SystemModel, config: Configuration, decide: Decide
) -> tuple[Configuration, TickRecord]:
    """Execute one tick along the branch selected by *decide*."""
    tick = _Tick(model, config, decide)
    for chart in model.charts:
        tick.run_chart(chart)
    minute = config.minute + 1
    if model.implicit_clock and CLOCK_VAR in tick.env:
        tick.env[CLOCK_VAR] = minute
    return tick.result(minute)


def _enumerate(run) -> list[tuple[Configuration, TickRecord]]:
    """Run *run(decide)* once per combination of choice-point outcomes."""
    results = []

    def explore(prefix):
        points = []

        def decide(label, options):
            k = len(points)
            value = prefix[k] if k < len(prefix) else options[0]
            points.append((options, value))
            return value

        results.append(run(decide))
        taken = [p[1] for p in points]
        for k in range(len(prefix), len(points)):
            for alt in points[k][0][1:]:
                explore(tuple(taken[:k]) + (alt,))

    explore(())
    return results


def _unique(pairs):
    seen = set()
    out = []
    for config, record in pairs:
        if config not in seen:
            seen.add(config)
            out.append((config, record))
    return out


def initial_transitions(model: SystemModel) -> list[tuple[Configuration, TickRecord]]:
    return _unique(_enumerate(lambda decide: run_initial(model, decide)))


def initial_configurations(model: SystemModel) -> list[Configuration]:
    return [c for c, _ in initial_transitions(model)]


def successors(
    model: SystemModel, config: Configuration
) -> list[tuple[Configuration, TickRecord]]:
    """All distinct successors of *config* with the tick record reaching each."""
    return _unique(_enumerate(lambda decide: run_tick(model, config, decide)))


def step(model: SystemModel, config: Configuration) -> list[Configuration]:
    """Distinct successor configurations, in deterministic order."""
    return [c for c, _ in successors(model, config)]
