"""Generate the resource statecharts: timer, demand charts and availability chart."""

from __future__ import annotations

from typing import Optional

from .demand import And, Demand, Or, Resource, resources, stages
from .expr import TRUE, BinOp, Expr, IntLit, Var, conjoin
from .model import (
    GENERATED_ANNOTATION,
    RES_PREFIX,
    Assign,
    CheckAvailable,
    ReadSchedule,
    RecordTime,
    State,
    Statechart,
    Transition,
    VariableDecl,
)
from .semantics import CLOCK_VAR

TIMER_CHART = "Timer"
AVAILABILITY_CHART = "Resource"
DEMAND_CHART_PREFIX = "Demand_"


def res_var(name: str) -> str:
    return RES_PREFIX + name


def stage_time_var(procedure: str, index: int) -> str:
    return f"{RES_PREFIX}{procedure}__t{index}"


def declare_vars(dmap) -> list[VariableDecl]:
    """``curT`` plus one false-initialised flag per procedure and per resource."""
    decls = [VariableDecl(CLOCK_VAR, "int", 0)]
    seen = set()
    names = list(dmap)
    for demand in dmap.values():
        names.extend(resources(demand))
    for name in names:
        if name not in seen:
            seen.add(name)
            decls.append(VariableDecl(res_var(name), "bool", False))
    return decls


def demand_chart_vars(procedure: str, demand: Demand) -> list[VariableDecl]:
    """Integer variables holding the minute each intermediate stage was met."""
    return [
        VariableDecl(stage_time_var(procedure, i), "int", 0)
        for i in range(1, len(stages(demand)))
    ]


def make_timer() -> Statechart:
    tick = Transition(
        "Tick", "Tick", TRUE,
        actions=(Assign(CLOCK_VAR, BinOp("+", Var(CLOCK_VAR), IntLit(1))),),
    )
    return Statechart(
        TIMER_CHART, (State("Tick"),), "Tick", (tick,),
        annotations=(GENERATED_ANNOTATION,),
    )


def stage_expr(stage: Demand) -> Expr:
    if isinstance(stage, Resource):
        return Var(res_var(stage.name))
    op = "&&" if isinstance(stage, And) else "||" if isinstance(stage, Or) else None
    if op is None:
        raise ValueError("SEQ nested beneath AND/OR")
    return BinOp(op, stage_expr(stage.left), stage_expr(stage.right))


def synthesize_demand_chart(procedure: str, demand: Demand, rank: int = 0) -> Statechart:
    """Chart ``ini -> tem... -> end`` that latches ``RES.<procedure>``.

    Stage k's transition waits until stage k's resources hold and, for a
    positive delay, until ``curT`` is that many minutes past the minute the
    previous stage was met.
    """
    parts = stages(demand)
    k = len(parts)
    if k == 2:
        middle = ["tem"]
    else:
        middle = [f"tem{i}" for i in range(1, k)]
    names = ["ini"] + middle + ["end"]

    states = [State("ini")]
    for i, name in enumerate(middle, 1):
        states.append(State(name, (RecordTime(stage_time_var(procedure, i)),)))
    states.append(State("end", (Assign(res_var(procedure), TRUE),)))

    transitions = []
    for i, (stage, delay) in enumerate(parts):
        guard = stage_expr(stage)
        if i > 0 and delay > 0:
            elapsed = BinOp("-", Var(CLOCK_VAR), Var(stage_time_var(procedure, i)))
            guard = conjoin(BinOp(">=", elapsed, IntLit(delay)), guard)
        transitions.append(Transition(names[i], names[i + 1], guard))

    return Statechart(
        DEMAND_CHART_PREFIX + procedure, tuple(states), "ini", tuple(transitions),
        rank, (GENERATED_ANNOTATION,),
    )


def synthesize_availability_chart(
    resource_names, schedule_path: str = "schedule.txt", rank: int = 0
) -> Statechart:
    """One-state chart that refreshes every ``RES.<resource>`` flag each minute."""
    resource_names = list(resource_names)
    if not resource_names:
        raise ValueError("availability chart needs at least one resource")
    entry = (ReadSchedule(schedule_path),) + tuple(
        CheckAvailable(res_var(r), r) for r in resource_names
    )
    return Statechart(
        AVAILABILITY_CHART, (State("Res", entry),), "Res",
        (Transition("Res", "Res", TRUE),), rank, (GENERATED_ANNOTATION,),
    )


def latch_minute(procedure: str, demand: Demand, schedule, limit: Optional[int] = None):
    """Minute of the tick in which the demand chart sets ``RES.<procedure>``.

    Runs the availability chart and the demand chart alone; returns ``None``
    if the flag is still false after *limit* minutes (default: the schedule
    horizon).
    """
    from .model import SystemModel
    from .semantics import run_initial, run_tick

    names = resources(demand)
    variables = [VariableDecl(CLOCK_VAR, "int", 0), VariableDecl(res_var(procedure), "bool", False)]
    variables += [VariableDecl(res_var(r), "bool", False) for r in names if r != procedure]
    variables += demand_chart_vars(procedure, demand)
    charts = (
        synthesize_availability_chart(names, rank=0),
        synthesize_demand_chart(procedure, demand, rank=1),
    )
    model = SystemModel(tuple(variables), charts, schedule)
    flag = res_var(procedure)

    def decide(label, options):
        raise AssertionError(f"unexpected choice point {label!r}")

    config, _ = run_initial(model, decide)
    last = schedule.horizon() if limit is None else limit
    while config.minute <= last:
        minute = config.minute
        config, _ = run_tick(model, config, decide)
        if config.vars[flag]:
            return minute
    return None
