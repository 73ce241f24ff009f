"""Resource-aware statechart models of clinical guidelines.

Guideline statecharts are annotated with the resources each procedure needs,
resource statecharts are generated from demand expressions and availability
schedules, the guideline guards are rewritten to wait on those resources, and
safety invariants of the combined system are checked over discrete time.
"""

from .annotate import annotate, collect_procedures
from .demand import (
    And,
    DemandMap,
    Or,
    Resource,
    Seq,
    earliest_enable,
    format_demand,
    parse_demand,
    parse_demand_map,
    stages,
)
from .expr import eval_expr, format_expr, parse_expr
from .integrate import assemble, integrate
from .model import (
    Assign,
    Choose,
    Raise,
    RecordTime,
    State,
    Statechart,
    SystemModel,
    Transition,
    VariableDecl,
    validate_model,
)
from .pipeline import build_system, check_guideline
from .schedule import AvailabilityMap, TimeInterval, horizon, is_available, parse_schedule
from .semantics import Configuration, initial_configurations, step
from .synthesize import (
    declare_vars,
    latch_minute,
    make_timer,
    synthesize_availability_chart,
    synthesize_demand_chart,
)
from .textfmt import format_system, load_system, parse_system
from .verify import Property, Script, Trace, parse_property, simulate, verify

__version__ = "0.1.0"
