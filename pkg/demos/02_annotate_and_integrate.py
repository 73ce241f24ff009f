"""
From a guideline model to a resource-aware system
=================================================

The stroke guideline raises the events ``CTscan`` and ``givetPA``. A demand
map says which resources each of them needs. Annotation marks the raising
states and transitions; integration then blocks those elements until the
matching procedure flag ``RES.<procedure>`` is set.
"""

from smjv.annotate import annotate
from smjv.expr import format_expr
from smjv.fixtures import stroke_demands, stroke_guideline, stroke_schedule
from smjv.integrate import integrate
from smjv.pipeline import build_system
from smjv.textfmt import format_system

guideline = stroke_guideline()
dmap = stroke_demands()
for proc, demand in dmap.items():
    print(proc, "needs", demand)

##############################################################################
# Annotation
# ----------
# Annotations are comment lines and do not change how the chart runs.

chart = annotate(guideline.charts[0], dmap)
for state in chart.states:
    for line in state.annotations:
        print(f"state {state.name}: {line}")
for t in chart.transitions:
    for line in t.annotations:
        print(f"{t.label}: {line}")

##############################################################################
# Integration
# -----------
# An annotated transition gets the procedure flag appended to its guard. An
# annotated state gets it on every transition entering it.

before = {t.label: format_expr(t.guard) for t in chart.transitions}
for t in integrate(chart).transitions:
    new = format_expr(t.guard)
    if new != before[t.label]:
        print(f"{t.label:18} {before[t.label]!r} -> {new!r}")

##############################################################################
# Assembling the whole system
# ---------------------------
# The assembled system adds one availability chart and one chart per
# procedure. It prints in the same text format the command line tools use.

system = build_system(guideline, dmap, stroke_schedule("ct"), schedule_path="ct.sched")
print([(c.name, c.rank) for c in system.charts])
print(format_system(system))
