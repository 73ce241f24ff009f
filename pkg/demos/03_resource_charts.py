"""
Demand charts and the minute they latch
=======================================

Each procedure gets a small chart ``ini -> tem... -> end``. Every transition
waits for one stage of the demand; entering ``end`` sets ``RES.<procedure>``
for good. The minute that happens should equal the earliest start computed
directly from the schedule.
"""

import random

from smjv.demand import earliest_enable, parse_demand
from smjv.expr import format_expr
from smjv.fixtures import stroke_schedule
from smjv.schedule import AvailabilityMap
from smjv.synthesize import latch_minute, synthesize_demand_chart

ct = parse_demand("CT_machine AND CT_technician SEQ(10) radiologist")
chart = synthesize_demand_chart("CTscan", ct)
for t in chart.transitions:
    print(f"{t.source:>3} -> {t.target:<3} [{format_expr(t.guard)}]")
for s in chart.states:
    print(s.name, s.entry)

##############################################################################
# Running the chart against the schedule
# --------------------------------------

schedule = stroke_schedule("ct")
print("chart latches at", latch_minute("CTscan", ct, schedule))
print("schedule scan says", earliest_enable(ct, schedule, 0))

##############################################################################
# Agreement on random inputs
# --------------------------
# A quick spot check over random single-resource timetables.

rng = random.Random(1)
demand = parse_demand("a OR b SEQ(5) c AND a")
agree = 0
for _ in range(200):
    sched = AvailabilityMap({
        name: [(s, s + rng.randint(0, 20))] for name in "abc" for s in [rng.randint(0, 60)]
    })
    agree += latch_minute("p", demand, sched) == earliest_enable(demand, sched, 0)
print(f"{agree}/200 agree")
