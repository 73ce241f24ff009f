"""
Resource demands and their earliest start
=========================================

A medical procedure needs resources. Demands combine resource names with
``AND``, ``OR`` and ``SEQ(t)``, where ``SEQ(t)`` means the right-hand side
is needed at least ``t`` minutes after the left-hand side was satisfied.
"""

from smjv.demand import earliest_enable, format_demand, parse_demand, stages
from smjv.fixtures import read_fixture, stroke_schedule

##############################################################################
# Parsing a demand
# ----------------
# ``AND`` binds tighter than ``OR``, which binds tighter than ``SEQ``. There
# are no parentheses in the grammar.

ct = parse_demand("CT_machine AND CT_technician SEQ(10) radiologist")
print(ct)
print(format_demand(ct))
print(parse_demand("a OR b AND c"))

##############################################################################
# A demand is a list of stages
# ----------------------------
# Each stage is an AND/OR combination plus the delay separating it from the
# previous stage.

for stage, delay in stages(ct):
    print(f"after {delay:>2} min: {format_demand(stage)}")

##############################################################################
# The schedule
# ------------
# Availability is a set of closed minute intervals per resource.

print(read_fixture("ct.sched"))
schedule = stroke_schedule("ct")
for minute in (12, 30, 41):
    free = [r for r in schedule if schedule.is_available(r, minute)]
    print(minute, free)

##############################################################################
# Earliest start
# --------------
# The machine and technician are both free at minute 10, so the radiologist
# is needed from minute 20 on. The radiologist is next free at minute 30.

print("CT scan can start at minute", earliest_enable(ct, schedule, 0))
print("starting the search at minute 31:", earliest_enable(ct, schedule, 31))
