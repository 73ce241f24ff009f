"""Bundled stroke-care fixtures."""

from __future__ import annotations

from importlib import resources

from .demand import parse_demand_map
from .schedule import parse_schedule
from .textfmt import parse_system
from .verify import parse_properties

_PACKAGE = "smjv.data.stroke"


def fixture_path(name: str):
    """Filesystem path of a bundled fixture file, e.g. ``"extended.sc"``."""
    return resources.files(_PACKAGE).joinpath(name)


def read_fixture(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def stroke_guideline(extended: bool = False):
    return parse_system(read_fixture("extended.sc" if extended else "simplified.sc"))


def stroke_demands(extended: bool = False):
    return parse_demand_map(read_fixture("extended.demands" if extended else "simplified.demands"))


def stroke_schedule(name: str = "all_available"):
    """One of ``ct``, ``all_available``, ``delay200`` or ``case_study``."""
    return parse_schedule(read_fixture(f"{name}.sched"))


def stroke_properties(extended: bool = False):
    return parse_properties(read_fixture("extended.props" if extended else "simplified.props"))
