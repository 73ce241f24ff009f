"""End-to-end helper: annotate, synthesize, integrate and verify in one call."""

from __future__ import annotations

from .annotate import annotate
from .integrate import assemble
from .model import SystemModel
from .verify import verify


def build_system(
    guideline: SystemModel, dmap, schedule, schedule_path: str = "schedule.txt", **kwargs
) -> SystemModel:
    """Annotate every guideline chart with *dmap* and assemble the full system."""
    annotated = guideline.with_charts(
        c if c.generated else annotate(c, dmap) for c in guideline.charts
    )
    return assemble(annotated, dmap, schedule, schedule_path, **kwargs)


def check_guideline(guideline, dmap, schedule, props, horizon=None, **kwargs):
    """Build the integrated system and verify *props* against it."""
    system = build_system(guideline, dmap, schedule)
    return verify(system, props, horizon=horizon, **kwargs)
