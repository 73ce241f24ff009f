"""
Checking the stroke guideline against a timetable
=================================================

Three safety properties are checked over every reachable configuration up
to a minute horizon:

* P1: tPA is only given with blood pressure under control and no bleeding.
* P2: the tPA decision is reached within 180 minutes of onset.
* P3: intra-arterial tPA is only decided on within 360 minutes.
"""

from smjv.fixtures import stroke_demands, stroke_guideline, stroke_properties, stroke_schedule
from smjv.pipeline import check_guideline
from smjv.verify import format_results

for prop in stroke_properties(extended=True):
    print(prop.name, prop)

##############################################################################
# Every resource available
# ------------------------

results = check_guideline(
    stroke_guideline(True), stroke_demands(True), stroke_schedule("all_available"),
    stroke_properties(True),
)
print(format_results(results))

##############################################################################
# CT resources free only from minute 210
# --------------------------------------
# The scan cannot start before minute 220 and the 180-minute deadline is
# missed. The shortest run that shows it is returned with the verdict.

results = check_guideline(
    stroke_guideline(True), stroke_demands(True), stroke_schedule("case_study"),
    stroke_properties(True),
)
print(format_results(results))
cex = results[1].counterexample
print(f"counterexample: {len(cex)} configurations, choices {cex.choices()}")
print("\n".join(cex.to_table().splitlines()[:4]))
print("...")
print("\n".join(cex.to_table().splitlines()[-4:]))
