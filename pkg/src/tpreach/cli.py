"""Command-line interface.

Subcommands: check (reachability verdict), simulate (concrete grid
exploration), translate-stats (symbolic construction counters), and
regions (rotation traces for debugging).  Exit code 0 means the
analysis completed — a verdict, reachable or not, is data.  Exit code 2
flags bad input (parse or model errors, unknown flags) and 3 an
internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import translate
from .dsl import ParseError, parse_model
from .pushdown import ModelError, Nop, Push, Reachable, Rewrite, saturate
from .regions import (Region, RegionError, parse_region, render_region,
                      rotate)
from .tpda import Tpda, compute_cmax, grid_oracle
from .translate import MidPopTop, Plain, Start, TranslationError

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "verdict": {"enum": ["reachable", "unreachable"]},
        "target": {"type": "string"},
        "witness": {"type": "array", "items": {"type": "string"}},
        "stats": {
            "type": "object",
            "properties": {"regions": {"type": "integer"},
                           "rules": {"type": "integer"},
                           "ms": {"type": "integer"}},
            "required": ["regions", "rules", "ms"],
            "additionalProperties": False,
        },
        "oracle": {
            "type": "object",
            "properties": {"states": {"type": "array",
                                      "items": {"type": "string"}}},
            "required": ["states"],
            "additionalProperties": False,
        },
    },
    "required": ["stats"],
    "additionalProperties": False,
}


def _state_text(state) -> str:
    if isinstance(state, Plain):
        return state.state
    if isinstance(state, Start):
        return "start"
    if isinstance(state, MidPopTop):
        r = state.rule
        return f"mid[pop({r.op.symbol})@{r.src}->{r.dst}]"
    return str(state)


def _sym_text(symbol) -> str:
    return render_region(symbol) if isinstance(symbol, Region) else str(symbol)


def _op_text(op) -> str:
    if isinstance(op, Nop):
        return "nop"
    if isinstance(op, Rewrite):
        return f"rewrite {_sym_text(op.old)} => {_sym_text(op.new)}"
    kind = "push" if isinstance(op, Push) else "pop"
    return f"{kind} {_sym_text(op.symbol)}"


def _witness_lines(witness) -> list[str]:
    return [f"{_state_text(r.src)} : {_op_text(r.op)} -> {_state_text(r.dst)}"
            for r in witness.steps]


def _load_model(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(0, 0, f"cannot read {path}: {exc.strerror}") from exc
    return parse_model(text)


def _emit(report: dict, as_json: bool, human: list[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        for line in human:
            print(line)


def _cmd_check(args) -> int:
    model = _load_model(args.model)
    started = time.monotonic()
    if isinstance(model, Tpda):
        verdict, stats = translate.analyze(model, args.target)
        regions, rules = stats.regions, stats.rules
    else:
        if model.states is not None and args.target not in model.states:
            raise ModelError(f"target state {args.target!r} not declared")
        sat = saturate(model)
        regions = len(sat.symbols_seen)
        rules = sat.rules_fetched
        witness = (sat.witness(args.target)
                   if args.target in sat.reachable() else None)
        verdict = Reachable(witness) if witness is not None else None
    ms = int((time.monotonic() - started) * 1000)
    reachable = isinstance(verdict, Reachable)
    report = {
        "verdict": "reachable" if reachable else "unreachable",
        "target": args.target,
        "stats": {"regions": regions, "rules": rules, "ms": ms},
    }
    human = [f"{args.target}: {report['verdict']}",
             f"stats: {regions} regions, {rules} rules, {ms} ms"]
    if args.witness and reachable:
        lines = _witness_lines(verdict.witness)
        report["witness"] = lines
        human.append(f"witness ({len(lines)} steps):")
        human.extend(f"  {i + 1}. {line}" for i, line in enumerate(lines))
    _emit(report, args.json, human)
    return 0


def _cmd_simulate(args) -> int:
    model = _load_model(args.model)
    if not isinstance(model, Tpda):
        raise ModelError("simulate needs a tpda model")
    started = time.monotonic()
    states = sorted(grid_oracle(model, args.max_steps, args.denominator))
    ms = int((time.monotonic() - started) * 1000)
    report = {
        "stats": {"regions": 0, "rules": 0, "ms": ms},
        "oracle": {"states": states},
    }
    grid = Fraction(1, args.denominator)
    human = [f"grid: delays in steps of {grid.numerator}/{grid.denominator} "
             f"up to {compute_cmax(model) + 1}, depth {args.max_steps}",
             "states: " + " ".join(states)]
    _emit(report, args.json, human)
    return 0


def _cmd_translate_stats(args) -> int:
    model = _load_model(args.model)
    if not isinstance(model, Tpda):
        raise ModelError("translate-stats needs a tpda model")
    started = time.monotonic()
    verdict, stats = translate.analyze(model, args.target)
    ms = int((time.monotonic() - started) * 1000)
    report = {
        "verdict": "reachable" if isinstance(verdict, Reachable) else "unreachable",
        "target": args.target,
        "stats": {"regions": stats.regions, "rules": stats.rules, "ms": ms},
    }
    human = [f"{args.target}: {report['verdict']}",
             f"regions: {stats.regions}",
             f"mid states: {stats.mid_states}",
             f"rules: {stats.rules}",
             f"ms: {ms}"]
    _emit(report, args.json, human)
    return 0


def _cmd_regions(args) -> int:
    if args.cmax is not None:
        cmax = args.cmax
    else:
        probe = parse_region(args.items, 10 ** 9)
        cmax = max((v for g in probe.sets for _it, v in g
                    if isinstance(v, int)), default=0)
    region = parse_region(args.items, cmax)
    print(render_region(region))
    for _ in range(args.rotate):
        region = rotate(region, move_ref=not args.pin_ref)
        print(render_region(region))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpreach",
        description="Reachability analysis for timed pushdown automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide reachability of a control state")
    p.add_argument("model", metavar="MODEL")
    p.add_argument("--target", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("simulate", help="explore concrete semantics on a grid")
    p.add_argument("model", metavar="MODEL")
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--denominator", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("translate-stats",
                       help="sizes of the symbolic construction")
    p.add_argument("model", metavar="MODEL")
    p.add_argument("--target", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_translate_stats)

    p = sub.add_parser("regions", help="print rotation traces of a region")
    p.add_argument("--items", required=True,
                   help='region text, e.g. "{R:0, x:0} < {y:1}"')
    p.add_argument("--rotate", type=int, default=1)
    p.add_argument("--pin-ref", action="store_true",
                   help="hold the reference item R at fractional part 0")
    p.add_argument("--cmax", type=int, default=None)
    p.set_defaults(func=_cmd_regions)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, ModelError, RegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TranslationError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main(argv=None))
