import contextlib

import pytest
from hypothesis import strategies as st

from smjv.demand import And, Or, Resource, Seq
from smjv.schedule import AvailabilityMap, TimeInterval

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion as PASS/FAIL for the terminal summary."""

    @contextlib.contextmanager
    def record(name, detail=""):
        try:
            yield
        except BaseException:
            _ACCEPTANCE.append((name, "FAIL", detail))
            raise
        _ACCEPTANCE.append((name, "PASS", detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, detail in _ACCEPTANCE:
        line = f"{verdict}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


RESOURCE_NAMES = ["r0", "r1", "r2", "r3"]


def and_chains(names):
    leaf = st.sampled_from(names).map(Resource)

    def build(items):
        d = items[0]
        for r in items[1:]:
            d = And(d, r)
        return d

    return st.lists(leaf, min_size=1, max_size=3).map(build)


def or_chains(names):
    def build(items):
        d = items[0]
        for r in items[1:]:
            d = Or(d, r)
        return d

    return st.lists(and_chains(names), min_size=1, max_size=3).map(build)


@st.composite
def demands(draw, names=RESOURCE_NAMES, max_stages=3, max_delay=30):
    """Demand trees the parenthesis-free grammar can express."""
    n = draw(st.integers(1, max_stages))
    d = draw(or_chains(names))
    for _ in range(n - 1):
        delay = draw(st.integers(0, max_delay))
        d = Seq(d, delay, draw(or_chains(names)))
    return d


@st.composite
def schedules(draw, names=RESOURCE_NAMES, horizon=120, max_intervals=4):
    entries = {}
    for name in names:
        if draw(st.booleans()) and draw(st.booleans()):
            continue  # roughly a quarter of resources are unscheduled
        ivs = []
        for _ in range(draw(st.integers(0, max_intervals))):
            a = draw(st.integers(0, horizon))
            b = draw(st.integers(a, min(horizon, a + 40)))
            ivs.append(TimeInterval(a, b))
        entries[name] = ivs
    return AvailabilityMap(entries)


def all_runs(model, ticks):
    """Every run of *model* over *ticks* minutes, one per complete choice script.

    Independent of the verifier: each run is a fresh :func:`simulate` call
    driven by a prefix of forced decisions, first option afterwards.
    """
    from smjv.verify import simulate

    stack = [()]
    while stack:
        prefix = stack.pop()
        points = []

        def decide(tick, label, options, prefix=prefix, points=points):
            k = len(points)
            value = prefix[k] if k < len(prefix) else options[0]
            points.append((options, value))
            return value

        yield simulate(model, decide, ticks)
        taken = [v for _, v in points]
        for k in range(len(prefix), len(points)):
            for alt in points[k][0][1:]:
                stack.append(tuple(taken[:k]) + (alt,))


def brute_force_verdicts(model, props, horizon):
    """Per property: earliest violating minute over all runs, or None."""
    earliest = [None] * len(props)
    for trace in all_runs(model, horizon):
        for entry in trace.entries:
            config = entry.configuration()
            for i, p in enumerate(props):
                if p.violated_by(config) and (earliest[i] is None or entry.minute < earliest[i]):
                    earliest[i] = entry.minute
    return earliest
