"""Guard rewriting and system assembly.

A transition annotated with ``//@RES: (p1, d1), ..., (pn, dn)`` gets its
guard strengthened to ``G && RES.p1 && ... && RES.pn``; an annotated state has
every incoming transition (self-loops included) strengthened the same way.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Iterable, Optional

from .annotate import resource_annotations
from .demand import resources
from .expr import Var, conjoin, conjuncts
from .model import Diagnostic, Statechart, SystemModel, check_valid
from .schedule import AvailabilityMap
from .synthesize import (
    declare_vars,
    demand_chart_vars,
    make_timer,
    res_var,
    synthesize_availability_chart,
    synthesize_demand_chart,
)

log = logging.getLogger(__name__)


class IntegrationError(ValueError):
    pass


def _procedures(annotations) -> list[str]:
    names = []
    for proc, _ in resource_annotations(annotations):
        if proc not in names:
            names.append(proc)
    return names


def integration_warnings(chart: Statechart) -> list[Diagnostic]:
    """Annotated initial states that no incoming transition can guard."""
    warnings = []
    for s in chart.states:
        if s.name == chart.initial and _procedures(s.annotations) and not chart.incoming(s.name):
            warnings.append(
                Diagnostic(
                    f"{chart.name}.{s.name}",
                    "initial state has resource demands but no incoming transition",
                    "warning",
                )
            )
    return warnings


def integrate(chart: Statechart, declared: Optional[Iterable[str]] = None) -> Statechart:
    """Rewrite the guards of *chart* according to its resource annotations.

    *declared* lists the declared variable names; when given, a procedure
    without a ``RES.<procedure>`` variable is an error.  Conjuncts already
    present are not added again, so integration is idempotent.
    """
    declared = set(declared) if declared is not None else None
    extra: list[list[str]] = [[] for _ in chart.transitions]
    for s in chart.states:
        procs = _procedures(s.annotations)
        if not procs:
            continue
        for i, t in enumerate(chart.transitions):
            if t.target == s.name:
                extra[i].extend(procs)
    for i, t in enumerate(chart.transitions):
        extra[i].extend(_procedures(t.annotations))

    transitions = []
    for t, procs in zip(chart.transitions, extra):
        present = conjuncts(t.guard)
        added = []
        for p in procs:
            name = res_var(p)
            if declared is not None and name not in declared:
                raise IntegrationError(
                    f"procedure {p!r} has no declared variable {name!r}"
                )
            flag = Var(name)
            if flag not in present and flag not in added:
                added.append(flag)
        if added:
            t = replace(t, guard=conjoin(t.guard, *added))
        transitions.append(t)

    for w in integration_warnings(chart):
        log.warning("%s", w)
    return replace(chart, transitions=tuple(transitions))


def _merge_vars(*groups):
    out = []
    seen = set()
    for group in groups:
        for v in group:
            if v.name not in seen:
                seen.add(v.name)
                out.append(v)
    return tuple(out)


def assemble(
    guideline: SystemModel,
    dmap,
    schedule: AvailabilityMap,
    schedule_path: str = "schedule.txt",
    include_timer: Optional[bool] = None,
) -> SystemModel:
    """Build the full system: availability chart, demand charts, integrated guideline.

    Charts marked as generated in *guideline* (from an earlier assembly) are
    dropped and regenerated, so assembling an assembled system is a no-op.
    Ranks: availability chart 0, demand charts 1..n, guideline charts after
    them in their original order, and the timer chart (if any) last.
    """
    if include_timer is None:
        include_timer = not guideline.implicit_clock
    guideline_charts = [c for c in guideline.charts if not c.generated]

    variables = list(declare_vars(dmap)) if dmap or include_timer else []
    for proc, demand in dmap.items():
        variables.extend(demand_chart_vars(proc, demand))
    variables = _merge_vars(guideline.variables, variables)
    declared = {v.name for v in variables}

    charts = []
    rank = 0
    needed = []
    for demand in dmap.values():
        needed.extend(r for r in resources(demand) if r not in needed)
    if needed:
        charts.append(synthesize_availability_chart(needed, schedule_path, rank=rank))
        rank += 1
    for proc, demand in dmap.items():
        charts.append(synthesize_demand_chart(proc, demand, rank=rank))
        rank += 1
    for chart in guideline_charts:
        charts.append(replace(integrate(chart, declared), rank=rank))
        rank += 1
    if include_timer:
        charts.append(replace(make_timer(), rank=rank))

    model = SystemModel(variables, tuple(charts), schedule, implicit_clock=not include_timer)
    return check_valid(model)
