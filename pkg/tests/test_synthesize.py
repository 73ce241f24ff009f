import pytest
from hypothesis import given, settings

from smjv.demand import earliest_enable, parse_demand, stages
from smjv.expr import TRUE, format_expr
from smjv.fixtures import stroke_demands, stroke_guideline, stroke_schedule
from smjv.model import Assign, CheckAvailable, ReadSchedule, RecordTime, SystemModel, VariableDecl
from smjv.pipeline import build_system
from smjv.schedule import AvailabilityMap
from smjv.semantics import initial_configurations, run_initial, run_tick, step
from smjv.synthesize import (
    declare_vars,
    latch_minute,
    make_timer,
    synthesize_availability_chart,
    synthesize_demand_chart,
)

from conftest import demands, schedules

CT = parse_demand("CT_machine AND CT_technician SEQ(10) radiologist")


def test_declare_vars_stroke():
    decls = declare_vars(stroke_demands())
    assert [d.name for d in decls] == [
        "curT", "RES.CTscan", "RES.givetPA", "RES.CT_machine", "RES.CT_technician",
        "RES.radiologist", "RES.tPA", "RES.nurse",
    ]
    assert decls[0] == VariableDecl("curT", "int", 0)
    assert all(d.kind == "bool" and d.initial is False for d in decls[1:])


def test_declare_vars_edge_cases():
    assert declare_vars({}) == [VariableDecl("curT", "int", 0)]
    shared = {"a": parse_demand("r AND s"), "b": parse_demand("r")}
    names = [d.name for d in declare_vars(shared)]
    assert names.count("RES.r") == 1


def test_timer():
    timer = make_timer()
    assert len(timer.states) == 1 and len(timer.transitions) == 1
    model = SystemModel((VariableDecl("curT", "int", 0),), (timer,), None, implicit_clock=False)
    (config,) = initial_configurations(model)
    for _ in range(5):
        (config,) = step(model, config)
    assert config.vars["curT"] == 5


def test_timer_flag():
    schedule = stroke_schedule("all_available")
    on = build_system(stroke_guideline(), stroke_demands(), schedule, include_timer=True)
    off = build_system(stroke_guideline(), stroke_demands(), schedule, include_timer=False)
    assert [c.name for c in on.charts][-1] == "Timer"
    assert "Timer" not in [c.name for c in off.charts]
    for model in (on, off):
        config = initial_configurations(model)[0]
        for _ in range(7):
            config = step(model, config)[0]
        assert config.vars["curT"] == 7


def _guards(chart):
    return [(t.source, t.target, format_expr(t.guard)) for t in chart.transitions]


def test_ct_demand_chart():
    chart = synthesize_demand_chart("CTscan", CT)
    assert [s.name for s in chart.states] == ["ini", "tem", "end"]
    assert _guards(chart) == [
        ("ini", "tem", "RES.CT_machine && RES.CT_technician"),
        ("tem", "end", "curT - RES.CTscan__t1 >= 10 && RES.radiologist"),
    ]
    assert chart.state("tem").entry == (RecordTime("RES.CTscan__t1"),)
    assert chart.state("end").entry == (Assign("RES.CTscan", TRUE),)
    assert chart.outgoing("end") == []


@pytest.mark.parametrize(
    "proc, text, guard",
    [
        ("givetPA", "tPA AND nurse", "RES.tPA && RES.nurse"),
        ("p", "a OR b", "RES.a || RES.b"),
    ],
)
def test_single_stage_charts(proc, text, guard):
    chart = synthesize_demand_chart(proc, parse_demand(text))
    assert [s.name for s in chart.states] == ["ini", "end"]
    assert _guards(chart) == [("ini", "end", guard)]
    assert chart.state("end").entry[0].var == f"RES.{proc}"


def test_zero_delay_stage_has_no_time_guard():
    chart = synthesize_demand_chart("p", parse_demand("a SEQ(0) b SEQ(3) c"))
    assert [s.name for s in chart.states] == ["ini", "tem1", "tem2", "end"]
    assert _guards(chart)[1] == ("tem1", "tem2", "RES.b")
    assert _guards(chart)[2] == ("tem2", "end", "curT - RES.p__t2 >= 3 && RES.c")


@given(demands())
def test_structure(demand):
    chart = synthesize_demand_chart("p", demand)
    k = len(stages(demand))
    assert len(chart.states) == k + 1
    assert len(chart.transitions) == k


def test_availability_chart():
    names = ["CT_machine", "CT_technician", "radiologist"]
    chart = synthesize_availability_chart(names, "ct.sched")
    (state,) = chart.states
    assert state.entry[0] == ReadSchedule("ct.sched")
    assert state.entry[1:] == tuple(CheckAvailable(f"RES.{r}", r) for r in names)
    assert _guards(chart) == [("Res", "Res", "true")]
    with pytest.raises(ValueError):
        synthesize_availability_chart([])


def _availability_model(schedule):
    names = ["CT_machine", "CT_technician", "radiologist"]
    variables = [VariableDecl("curT", "int", 0)] + [
        VariableDecl(f"RES.{r}", "bool", False) for r in names
    ]
    return SystemModel(tuple(variables), (synthesize_availability_chart(names),), schedule)


@pytest.mark.parametrize(
    "minute, expected",
    [(12, (True, False, True)), (41, (False, False, False)), (30, (False, False, True))],
)
def test_availability_flags(minute, expected):
    model = _availability_model(stroke_schedule("ct"))
    config, _ = run_initial(model, None)
    while config.minute <= minute:
        config, _ = run_tick(model, config, None)
    # flags seen in the configuration of minute m + 1 were computed at minute m
    v = config.vars
    assert (v["RES.CT_machine"], v["RES.CT_technician"], v["RES.radiologist"]) == expected


def test_flags_track_schedule_in_full_system():
    schedule = stroke_schedule("case_study")
    model = build_system(stroke_guideline(True), stroke_demands(True), schedule)
    resources = [v.name[4:] for v in model.variables if v.name.startswith("RES.")
                 and v.name[4:] in schedule]
    config = initial_configurations(model)[0]
    for _ in range(320):
        minute = config.minute
        config = step(model, config)[-1]
        for r in resources:
            assert config.vars[f"RES.{r}"] == schedule.is_available(r, minute)


def test_procedure_flags_latch():
    schedule = stroke_schedule("case_study")
    model = build_system(stroke_guideline(True), stroke_demands(True), schedule)
    flags = [f"RES.{p}" for p in stroke_demands(True)]
    config = initial_configurations(model)[0]
    for _ in range(360):
        nxt = step(model, config)[0]
        for f in flags:
            assert not config.vars[f] or nxt.vars[f]
        config = nxt
    assert config.vars["RES.CTscan"]


def test_ct_latch_equals_oracle():
    schedule = stroke_schedule("ct")
    assert earliest_enable(CT, schedule, 0) == 30
    assert latch_minute("CTscan", CT, schedule) == 30


@pytest.mark.parametrize("name", ["ct", "all_available", "delay200", "case_study"])
@pytest.mark.parametrize("extended", [False, True])
def test_fixture_latches_equal_oracle(name, extended):
    schedule = stroke_schedule(name)
    for proc, demand in stroke_demands(extended).items():
        assert latch_minute(proc, demand, schedule) == earliest_enable(demand, schedule, 0)


@settings(max_examples=200, deadline=None)
@given(demands(), schedules())
def test_latch_equals_oracle_randomized(demand, schedule):
    assert latch_minute("p", demand, schedule) == earliest_enable(demand, schedule, 0)


def test_unsatisfiable_demand_never_latches():
    schedule = AvailabilityMap({"a": [(0, 5)]})
    assert latch_minute("p", parse_demand("a SEQ(10) a"), schedule) is None
