"""Statechart intermediate representation and model validation."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from .expr import TRUE, Expr, ExprError, IDENT_RE, format_expr, infer_type, variables
from .schedule import AvailabilityMap

RES_PREFIX = "RES."
RES_ANNOTATION = "//@RES:"
GENERATED_ANNOTATION = "//@GENERATED"


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Raise:
    event: str


@dataclass(frozen=True)
class Choose:
    """Nondeterministic boolean havoc of a free variable."""

    var: str


@dataclass(frozen=True)
class RecordTime:
    """Store the current minute in an integer variable."""

    var: str


@dataclass(frozen=True)
class ReadSchedule:
    """Load the availability schedule at *path*.

    The schedule is attached to the :class:`SystemModel` once at load time, so
    executing this action is a no-op.
    """

    path: str


@dataclass(frozen=True)
class CheckAvailable:
    """Set boolean *var* to whether *resource* is available this minute."""

    var: str
    resource: str


Action = Union[Assign, Raise, Choose, RecordTime, ReadSchedule, CheckAvailable]


@dataclass(frozen=True)
class State:
    name: str
    entry: tuple[Action, ...] = ()
    annotations: tuple[str, ...] = ()


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    guard: Expr = TRUE
    trigger: Optional[str] = None
    actions: tuple[Action, ...] = ()
    annotations: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return f"{self.source}->{self.target}"


@dataclass(frozen=True)
class Statechart:
    name: str
    states: tuple[State, ...]
    initial: str
    transitions: tuple[Transition, ...] = ()
    rank: int = 0
    annotations: tuple[str, ...] = ()

    def state(self, name: str) -> State:
        for s in self.states:
            if s.name == name:
                return s
        raise KeyError(name)

    def outgoing(self, name: str) -> list[Transition]:
        return [t for t in self.transitions if t.source == name]

    def incoming(self, name: str) -> list[Transition]:
        return [t for t in self.transitions if t.target == name]

    @property
    def generated(self) -> bool:
        return GENERATED_ANNOTATION in self.annotations


@dataclass(frozen=True)
class VariableDecl:
    name: str
    kind: str  # "bool" | "int"
    initial: Union[int, bool] = False
    free: bool = False

    def __post_init__(self):
        if self.kind not in ("bool", "int"):
            raise ValueError(f"unknown variable kind {self.kind!r}")


@dataclass(frozen=True)
class SystemModel:
    """A set of statecharts executed together, one minute per tick.

    ``implicit_clock`` makes the step function advance ``curT`` itself; it is
    switched off when an explicit timer chart is part of the system.
    """

    variables: tuple[VariableDecl, ...]
    charts: tuple[Statechart, ...]
    schedule: Optional[AvailabilityMap] = None
    implicit_clock: bool = True

    def __post_init__(self):
        ordered = tuple(sorted(self.charts, key=lambda c: c.rank))
        object.__setattr__(self, "charts", ordered)

    def chart(self, name: str) -> Statechart:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(name)

    def var_types(self) -> dict[str, str]:
        return {v.name: v.kind for v in self.variables}

    def with_charts(self, charts) -> "SystemModel":
        return replace(self, charts=tuple(charts))


@dataclass(frozen=True)
class Diagnostic:
    where: str
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.severity}: {self.where}: {self.message}"


class ModelError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def action_reads(action: Action) -> set[str]:
    if isinstance(action, Assign):
        return variables(action.expr)
    return set()


def action_writes(action: Action) -> Optional[str]:
    if isinstance(action, (Assign, Choose, RecordTime, CheckAvailable)):
        return action.var
    return None


def raised_events(actions) -> list[str]:
    return [a.event for a in actions if isinstance(a, Raise)]


def validate_model(model: SystemModel) -> list[Diagnostic]:
    """Check structural and typing invariants; an empty list means valid."""
    diags: list[Diagnostic] = []
    types: dict[str, str] = {}
    free: set[str] = set()
    for v in model.variables:
        if not IDENT_RE.match(v.name):
            diags.append(Diagnostic(f"variable {v.name}", "invalid variable name"))
        if v.name in types:
            diags.append(Diagnostic(f"variable {v.name}", "duplicate variable name"))
            continue
        types[v.name] = v.kind
        want = bool if v.kind == "bool" else int
        if type(v.initial) is not want:
            diags.append(
                Diagnostic(f"variable {v.name}", f"initial value is not {v.kind}")
            )
        if v.free:
            if v.kind != "bool":
                diags.append(
                    Diagnostic(f"variable {v.name}", "only bool variables may be free")
                )
            free.add(v.name)

    names = [c.name for c in model.charts]
    for n in sorted({n for n in names if names.count(n) > 1}):
        diags.append(Diagnostic(f"chart {n}", "duplicate chart name"))
    ranks = [c.rank for c in model.charts]
    if len(set(ranks)) != len(ranks):
        diags.append(Diagnostic("system", "chart ranks are not distinct"))

    for chart in model.charts:
        diags.extend(_validate_chart(chart, types, free, model))
    return diags


def _validate_chart(chart, types, free, model):
    diags = []
    state_names = [s.name for s in chart.states]
    seen = set()
    for n in state_names:
        if n in seen:
            diags.append(
                Diagnostic(f"chart {chart.name}", f"duplicate state name {n!r}")
            )
        seen.add(n)
    if chart.initial not in seen:
        diags.append(
            Diagnostic(f"chart {chart.name}", f"initial state {chart.initial!r} missing")
        )
    for s in chart.states:
        where = f"{chart.name}.{s.name}"
        diags.extend(_validate_actions(s.entry, where, types, free, model))
    for t in chart.transitions:
        where = f"{chart.name}: {t.label}"
        for end in (t.source, t.target):
            if end not in seen:
                diags.append(Diagnostic(where, f"unknown state {end!r}"))
        try:
            kind = infer_type(t.guard, types)
        except ExprError as exc:
            diags.append(Diagnostic(where, f"guard: {exc}"))
        else:
            if kind != "bool":
                diags.append(
                    Diagnostic(where, f"guard {format_expr(t.guard)!r} is not boolean")
                )
        diags.extend(_validate_actions(t.actions, where, types, free, model))
    return diags


def _validate_actions(actions, where, types, free, model):
    diags = []
    for a in actions:
        target = action_writes(a)
        if target is not None and target not in types:
            diags.append(Diagnostic(where, f"undeclared variable {target!r}"))
            continue
        if isinstance(a, Assign):
            try:
                kind = infer_type(a.expr, types)
            except ExprError as exc:
                diags.append(Diagnostic(where, str(exc)))
                continue
            if kind != types[a.var]:
                diags.append(
                    Diagnostic(where, f"cannot assign {kind} to {types[a.var]} {a.var!r}")
                )
        elif isinstance(a, Choose):
            if a.var not in free:
                diags.append(
                    Diagnostic(where, f"choose target {a.var!r} is not declared free")
                )
        elif isinstance(a, RecordTime):
            if types[a.var] != "int":
                diags.append(Diagnostic(where, f"record target {a.var!r} is not int"))
        elif isinstance(a, CheckAvailable):
            if types[a.var] != "bool":
                diags.append(Diagnostic(where, f"check target {a.var!r} is not bool"))
            if model.schedule is None:
                diags.append(
                    Diagnostic(where, "availability check without a loaded schedule")
                )
    return diags


def check_valid(model: SystemModel) -> SystemModel:
    diags = validate_model(model)
    if diags:
        raise ModelError(diags)
    return model
