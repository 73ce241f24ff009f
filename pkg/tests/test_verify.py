import pytest
from hypothesis import given, settings, strategies as st

from smjv.fixtures import stroke_demands, stroke_guideline, stroke_properties, stroke_schedule
from smjv.pipeline import build_system, check_guideline
from smjv.schedule import AvailabilityMap
from smjv.semantics import step
from smjv.textfmt import parse_system
from smjv.verify import (
    HOLDS,
    RESOURCE_LIMIT,
    VIOLATED,
    PropertyError,
    Script,
    ScriptExhausted,
    Trace,
    format_results,
    format_script,
    parse_properties,
    parse_property,
    parse_script,
    simulate,
    verify,
)

from conftest import brute_force_verdicts


@pytest.mark.parametrize(
    "text, chart, state, condition",
    [
        ("A[] Stroke.tPAcheck imply tpaT - onsetT <= 180", "Stroke", "tPAcheck", "tpaT - onsetT <= 180"),
        ("A[] Stroke.IAtPA imply tpaT - onsetT <= 360", "Stroke", "IAtPA", "tpaT - onsetT <= 360"),
        (
            "A[] Stroke.tPA imply systolicBP <= 185 && diastolicBP <= 110 && !hemorrhage",
            "Stroke", "tPA", "systolicBP <= 185 && diastolicBP <= 110 && !hemorrhage",
        ),
        ("P9: A [ ] C.s imply x", "C", "s", "x"),
    ],
)
def test_parse_property(text, chart, state, condition):
    p = parse_property(text)
    assert (p.chart, p.state) == (chart, state)
    assert str(p).endswith(condition)


def test_property_file_names_and_errors():
    props = parse_properties("# stroke\nA[] S.a imply x\n\nQ: A[] S.b imply y\nA[] S.c imply z\n")
    assert [p.name for p in props] == ["P1", "Q", "P3"]
    with pytest.raises(PropertyError, match="line 2"):
        parse_properties("A[] S.a imply x\nA[] S imply x\n")
    with pytest.raises(PropertyError, match="line 1"):
        parse_properties("A[] S.a imply x &&\n")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("A[] Nope.tPA imply true", "unknown chart"),
        ("A[] Stroke.Nope imply true", "unknown state"),
        ("A[] Stroke.tPA imply missing", "missing"),
        ("A[] Stroke.tPA imply curT + 1", "not boolean"),
    ],
)
def test_binding_errors(text, fragment):
    model = stroke_guideline()
    with pytest.raises(PropertyError, match=fragment):
        verify(model, [parse_property(text)], horizon=5)


def _verdicts(extended, schedule):
    results = check_guideline(
        stroke_guideline(extended), stroke_demands(extended), stroke_schedule(schedule),
        stroke_properties(extended),
    )
    return {r.prop.name: r.verdict for r in results}, results


@pytest.mark.parametrize(
    "extended, schedule, expected",
    [
        (False, "all_available", {"P1": HOLDS, "P2": HOLDS}),
        (False, "delay200", {"P1": HOLDS, "P2": VIOLATED}),
        (True, "all_available", {"P1": HOLDS, "P2": HOLDS, "P3": HOLDS}),
        (True, "delay200", {"P1": HOLDS, "P2": VIOLATED, "P3": HOLDS}),
        (True, "case_study", {"P1": HOLDS, "P2": VIOLATED, "P3": HOLDS}),
    ],
)
def test_stroke_verdicts(extended, schedule, expected):
    verdicts, results = _verdicts(extended, schedule)
    assert verdicts == expected
    for r in results:
        assert (r.counterexample is not None) == (r.verdict == VIOLATED)
        assert r.horizon == 420


def test_counterexample_shape_and_replay():
    _, results = _verdicts(True, "case_study")
    r = next(r for r in results if r.verdict == VIOLATED)
    cex = r.counterexample
    assert [e.minute for e in cex.entries] == list(range(len(cex)))
    final = cex.final.configuration()
    assert r.prop.violated_by(final)
    # consecutive entries are related by the step relation
    model = build_system(stroke_guideline(True), stroke_demands(True), stroke_schedule("case_study"))
    for a, b in zip(cex.entries, cex.entries[1:]):
        assert b.configuration() in step(model, a.configuration())
    replay = simulate(model, cex.script(), len(cex) - 1)
    assert replay == cex


def test_counterexample_is_minimal():
    model = build_system(stroke_guideline(), stroke_demands(), stroke_schedule("delay200"))
    (prop,) = [p for p in stroke_properties() if p.name == "P2"]
    (r,) = verify(model, [prop])
    first = brute_force_verdicts(model, [prop], len(r.counterexample) - 1)[0]
    assert first == r.counterexample.final.minute


def test_resource_limit_is_explicit():
    model = build_system(stroke_guideline(True), stroke_demands(True), stroke_schedule("case_study"))
    results = verify(model, stroke_properties(True), max_states=50)
    assert {r.verdict for r in results} == {RESOURCE_LIMIT}
    assert all(not r.holds for r in results)


def test_violation_found_before_limit_is_kept():
    model = stroke_guideline()
    bad = parse_property("A[] Stroke.Arrive imply curT > 100")
    (r,) = verify(model, [bad], max_states=5)
    assert r.verdict == VIOLATED and len(r.counterexample) == 1


@pytest.mark.parametrize("jobs", [2, 4])
def test_results_independent_of_jobs(jobs):
    model = build_system(stroke_guideline(True), stroke_demands(True), stroke_schedule("case_study"))
    props = stroke_properties(True)
    one = verify(model, props)
    many = verify(model, props, jobs=jobs)
    assert [(r.verdict, r.counterexample, r.states_explored) for r in one] == [
        (r.verdict, r.counterexample, r.states_explored) for r in many
    ]
    assert format_results(one) == format_results(many)


def test_horizon_must_be_positive():
    with pytest.raises(ValueError):
        verify(stroke_guideline(), stroke_properties(), horizon=0)


# -- simulation ----------------------------------------------------------------


def _all_available():
    return build_system(stroke_guideline(), stroke_demands(), stroke_schedule("all_available"))


def test_simulate_reaches_tpa_in_time():
    trace = simulate(_all_available(), {"bpHigh": False, "hemorrhage": False}, 60)
    entry = next(e for e in trace.entries if ("Stroke", "tPA") in e.active)
    v = dict(entry.vars)
    assert v["tPAad"] is True
    assert v["tpaT"] - v["onsetT"] <= 180


def test_hemorrhage_never_enters_tpa():
    trace = simulate(_all_available(), {"bpHigh": False, "hemorrhage": True}, 120)
    assert all(("Stroke", "tPA") not in e.active for e in trace.entries)
    assert ("Stroke", "Aspirin") in trace.final.active


def test_zero_ticks():
    trace = simulate(_all_available(), {"bpHigh": False}, 0)
    assert len(trace) == 1 and trace.final.minute == 0


def test_script_exhausted_names_tick_and_label():
    with pytest.raises(ScriptExhausted) as info:
        simulate(_all_available(), {"bpHigh": False}, 60)
    assert info.value.label == "hemorrhage"
    assert info.value.tick == 21


def test_script_value_must_be_an_option():
    with pytest.raises(ValueError, match="not one of"):
        simulate(_all_available(), [("bpHigh", 3)], 5)


def test_seeded_runs_are_reproducible():
    model = build_system(stroke_guideline(True), stroke_demands(True), stroke_schedule("case_study"))
    assert simulate(model, 7, 300) == simulate(model, 7, 300)
    traces = {simulate(model, seed, 300).to_records() for seed in range(20)}
    assert len(traces) > 1


def test_trace_records_round_trip():
    model = build_system(stroke_guideline(True), stroke_demands(True), stroke_schedule("case_study"))
    trace = simulate(model, 3, 250)
    assert Trace.from_records(trace.to_records()) == trace
    first = trace.to_records().splitlines()[0]
    assert first.startswith('{"minute": 0, "active": {')
    table = trace.to_table().splitlines()
    assert table[0].split() == ["minute", "active", "fired", "choices", "changed", "vars"]
    assert len(table) == len(trace) + 1


def test_script_text_round_trip():
    script = Script([("bpHigh", True), ("@Stroke", 2), ("hemorrhage", False)])
    assert parse_script(format_script(script)) == script
    assert Script({"a": [True, False], "b": 1}).choices == [("a", True), ("a", False), ("b", 1)]
    with pytest.raises(ValueError, match="line 1"):
        parse_script("bpHigh maybe\n")


# -- soundness against brute force ----------------------------------------------

TIGHT = """
A[] Stroke.tPAcheck imply tpaT - onsetT <= 30
A[] Stroke.tPA imply systolicBP <= 185 && diastolicBP <= 110 && !hemorrhage
A[] Stroke.CT imply !hemorrhage || curT > 40
A[] Stroke.tPA imply curT <= 45
A[] Stroke.Aspirin imply !bpHigh
"""

SMALL_SCHEDULES = [
    {"CT_machine": [(0, 60)], "CT_technician": [(0, 60)], "radiologist": [(0, 60)],
     "tPA": [(0, 60)], "nurse": [(0, 60)], "specialist": [(0, 60)], "neurologist": [(0, 60)],
     "catheter_equipment": [(0, 60)], "technician": [(0, 60)]},
    {"CT_machine": [(10, 25), (35, 40)], "CT_technician": [(0, 10), (15, 25), (35, 40)],
     "radiologist": [(0, 15), (30, 40)], "tPA": [(0, 60)], "nurse": [(44, 60)],
     "neurologist": [(5, 8)]},
    {"CT_machine": [(25, 60)], "CT_technician": [(20, 60)], "radiologist": [(0, 60)],
     "tPA": [(0, 60)], "nurse": [(0, 60)], "specialist": [(30, 31)]},
]


@pytest.mark.parametrize("extended", [False, True])
@pytest.mark.parametrize("index", range(len(SMALL_SCHEDULES)))
@pytest.mark.parametrize("horizon", [30, 60])
def test_soundness_against_brute_force(extended, index, horizon):
    schedule = AvailabilityMap(SMALL_SCHEDULES[index])
    model = build_system(stroke_guideline(extended), stroke_demands(extended), schedule)
    props = parse_properties(TIGHT)
    results = verify(model, props, horizon=horizon)
    expected = brute_force_verdicts(model, props, horizon)
    for r, first in zip(results, expected):
        assert (r.verdict == VIOLATED) == (first is not None)
        if first is not None:
            assert r.counterexample.final.minute == first


BRANCHY = """
var curT: int = 0
var x: int = 0
var a: bool = false free
var b: bool = false free
var c: bool = false free
chart M rank 0 {
  initial s0
  state s0
  state s1 {
    entry choose a
  }
  state s2 {
    entry choose b
    entry x = x + 1
  }
  state s3 {
    entry choose c
  }
  s0 -> s1 [curT >= 1]
  s0 -> s2 [curT >= 2]
  s1 -> s2 [a]
  s1 -> s3
  s2 -> s3 [b || x > 2]
  s2 -> s1
  s3 -> s0 [c]
}
"""


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(1, 12), st.sampled_from(["s1", "s2", "s3"]))
def test_soundness_on_branchy_chart(limit, horizon, state):
    model = parse_system(BRANCHY)
    prop = parse_property(f"A[] M.{state} imply x < {limit} || !a")
    (r,) = verify(model, [prop], horizon=horizon)
    (first,) = brute_force_verdicts(model, [prop], horizon)
    assert (r.verdict == VIOLATED) == (first is not None)
    if first is not None:
        assert r.counterexample.final.minute == first
