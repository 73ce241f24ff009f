"""Command-line driver for the annotate / integrate / verify / simulate stages.

Exit codes: 0 success (all properties hold), 1 a property is violated,
2 input error, 3 the verifier hit its state budget.
"""

from __future__ import annotations

import argparse
import os
import sys

from .annotate import annotate
from .demand import DemandError, load_demand_map
from .expr import ExprError
from .integrate import IntegrationError, assemble
from .model import ModelError, validate_model
from .schedule import ScheduleError, load_schedule
from .textfmt import FormatError, format_system, load_system
from .verify import (
    DEFAULT_MAX_STATES,
    RESOURCE_LIMIT,
    VIOLATED,
    PropertyError,
    ScriptExhausted,
    format_results,
    format_script,
    load_properties,
    parse_script,
    simulate,
    verify,
)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3

INPUT_ERRORS = (
    OSError,
    FormatError,
    DemandError,
    ScheduleError,
    ExprError,
    PropertyError,
    ModelError,
    IntegrationError,
    ValueError,
)


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_annotate(args) -> int:
    with open(args.model, encoding="utf-8") as fh:
        original = fh.read()
    model = load_system(args.model)
    dmap = load_demand_map(args.demands)
    annotated = model.with_charts(
        c if c.generated else annotate(c, dmap) for c in model.charts
    )
    _write(original if annotated == model else format_system(annotated), args.out)
    return EXIT_OK


def cmd_integrate(args) -> int:
    schedule = load_schedule(args.schedule)
    model = load_system(args.model, schedule=schedule)
    dmap = load_demand_map(args.demands)
    if args.out and args.out != "-":
        out_dir = os.path.dirname(os.path.abspath(args.out))
        schedule_ref = os.path.relpath(os.path.abspath(args.schedule), out_dir)
    else:
        schedule_ref = args.schedule
    include_timer = True if args.timer else None
    system = assemble(model, dmap, schedule, schedule_ref, include_timer=include_timer)
    _write(format_system(system), args.out)
    return EXIT_OK


def _check(model):
    diags = validate_model(model)
    if diags:
        raise ModelError(diags)


def cmd_verify(args) -> int:
    model = load_system(args.system)
    _check(model)
    props = load_properties(args.properties)
    results = verify(model, props, horizon=args.horizon, max_states=args.max_states, jobs=args.jobs)
    sys.stdout.write(format_results(results))
    out_dir = args.out or os.path.dirname(os.path.abspath(args.system))
    for r in results:
        if r.verdict != VIOLATED:
            continue
        os.makedirs(out_dir, exist_ok=True)
        base = os.path.join(out_dir, f"{r.prop.name}.cex")
        trace = r.counterexample
        text = trace.to_records() if args.format == "records" else trace.to_table()
        _write(text, base + (".jsonl" if args.format == "records" else ".txt"))
        _write(format_script(trace.script()), base + ".script")
        print(f"{r.prop.name}: counterexample ({len(trace)} entries) written to {base}.*")
    if any(r.verdict == VIOLATED for r in results):
        return EXIT_VIOLATED
    if any(r.verdict == RESOURCE_LIMIT for r in results):
        return EXIT_LIMIT
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = load_system(args.system)
    _check(model)
    if args.script is not None:
        with open(args.script, encoding="utf-8") as fh:
            resolver = parse_script(fh.read())
    elif args.seed is not None:
        resolver = args.seed
    else:
        resolver = None
    try:
        trace = simulate(model, resolver, max_ticks=args.ticks)
    except ScriptExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = trace.to_records() if args.format == "records" else trace.to_table()
    _write(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smjv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="add //@RES: annotations to a guideline model")
    p.add_argument("model")
    p.add_argument("demands")
    p.add_argument("out", nargs="?")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("integrate", help="generate resource charts and rewrite guards")
    p.add_argument("model", help="annotated guideline model")
    p.add_argument("demands")
    p.add_argument("schedule")
    p.add_argument("out", nargs="?")
    p.add_argument("--timer", action="store_true", help="emit an explicit Timer chart")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("verify", help="check A[] properties up to a horizon")
    p.add_argument("system")
    p.add_argument("properties")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--out", help="directory for counterexample files")
    p.add_argument("--format", choices=("table", "records"), default="records")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run one branch of the system")
    p.add_argument("system")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--script")
    group.add_argument("--seed", type=int)
    p.add_argument("--ticks", type=int, default=60)
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    for name in ("annotate", "integrate"):
        sub.choices[name].add_argument("--out", dest="out_flag")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "out_flag", None):
        args.out = args.out_flag
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        if isinstance(exc, OSError) and exc.filename:
            print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
