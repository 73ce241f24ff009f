"""
Simulating runs and replaying counterexamples
=============================================

A run is fixed by the answers to its choice points: havoc variables such as
``hemorrhage`` and picks between simultaneously enabled transitions. A
script lists those answers; a seed draws them pseudo-randomly.
"""

from smjv.fixtures import stroke_demands, stroke_guideline, stroke_properties, stroke_schedule
from smjv.pipeline import build_system
from smjv.verify import ScriptExhausted, simulate, verify

system = build_system(stroke_guideline(), stroke_demands(), stroke_schedule("all_available"))

##############################################################################
# A scripted run
# --------------

trace = simulate(system, {"bpHigh": False, "hemorrhage": False}, 30)
print(trace.to_table())

##############################################################################
# A script that runs out of answers stops with the minute and the label of
# the unanswered choice.

try:
    simulate(system, {"bpHigh": False}, 30)
except ScriptExhausted as exc:
    print(exc)

##############################################################################
# Seeds are reproducible
# ----------------------

a = simulate(system, 5, 60)
b = simulate(system, 5, 60)
print(a == b, a.choices())

##############################################################################
# Replaying a counterexample
# --------------------------
# The choices recorded in a counterexample reproduce it exactly.

late = build_system(stroke_guideline(), stroke_demands(), stroke_schedule("delay200"))
p2 = stroke_properties()[1]
(result,) = verify(late, [p2])
cex = result.counterexample
replay = simulate(late, cex.script(), len(cex) - 1)
print(result.verdict, replay == cex, dict(replay.final.vars)["tpaT"])
