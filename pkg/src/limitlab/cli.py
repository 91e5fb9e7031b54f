"""Batch command line front end.

Subcommands: run, oracle, inspect, encode, decode, nf-check.  Every output
except `inspect` is line-delimited JSON with numbers as decimal strings, and
identical invocations produce byte-identical output (no timestamps).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Callable, Optional

from . import histories, oracle, properties
from .encoding import decode_prefix, encode_prefix, pair, tuple_code, tuple_decode, unpair
from .engine import (
    DEFAULT_BUDGET_BASE,
    DEFAULT_BUDGET_SLOPE,
    DEFAULT_STABILIZATION_WINDOW,
    BudgetSchedule,
    StageFunction,
    run_stages,
    stabilization,
    trace_lines,
)
from .machine import (
    Diverger,
    Halted,
    Literal,
    Table,
    decode_program,
    index_to_program,
    run,
    run_on_empty,
    table_index,
    trace,
)

BUDGET_BASE_ENV = "LIMITLAB_BUDGET_BASE"


def _record(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _nat(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return value


def _index_list(text: str) -> list[int]:
    values = [int(part) for part in text.split(",") if part != ""]
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("expected a comma list of naturals")
    return values


def _cycled(values: list[int]) -> Callable[[int], int]:
    return lambda n: values[n % len(values)]


def _build_property(args: argparse.Namespace, input_value: int) -> StageFunction:
    pid = args.property
    if pid == "k":
        return properties.shortest_program_property(input_value)
    if pid == "incompressible":
        return properties.incompressible_property(input_value)
    if pid == "partial-detect":
        return properties.divergence_search_property(input_value)
    if pid == "partial-enum":
        return properties.divergers_enumeration_property(
            input_value, window=args.confirm_window
        )
    if pid == "easy-eq":
        i, j = unpair(input_value)
        g = properties.StepBound(*args.g_bound)
        h = properties.StepBound(*args.h_bound)
        return properties.bounded_equality_property(i, j, g, h)
    if pid == "class-eq":
        if args.class_a is None or args.class_b is None:
            raise SystemExit("class-eq needs --class-a and --class-b")
        i, j = unpair(input_value)
        return properties.class_equality_property(
            i, j, _cycled(args.class_a), _cycled(args.class_b)
        )
    if pid == "error-ratio":
        i, j = unpair(input_value)
        return properties.error_ratio_property(i, j)
    if pid == "canonical":
        if args.src is None:
            raise SystemExit("canonical needs --src")
        return properties.canonical_enumeration(_cycled(args.src))(input_value)
    if pid == "cbe":
        if args.src is None:
            raise SystemExit("cbe needs --src")
        canon = properties.canonical_enumeration(_cycled(args.src))
        candidates = _cycled(args.candidates) if args.candidates else None
        return properties.complexity_bound_enumeration(canon, candidates)(input_value)
    raise SystemExit(f"unknown property id: {pid}")


def _emit(lines: list[str], output: Optional[str]) -> None:
    text = "".join(line + "\n" for line in lines)
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_run(args: argparse.Namespace) -> int:
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            batch = json.load(fh)
        for entry in batch["runs"]:
            ns = _run_namespace_from(entry)
            code = _cmd_run(ns)
            if code != 0:
                return code
        return 0
    if args.property is None or args.input is None:
        raise SystemExit("run needs a property id and an input (or --config)")
    if args.property not in properties.PROPERTY_IDS:
        print(f"unknown property id: {args.property}", file=sys.stderr)
        return 2
    input_value = int(args.input)
    f = _build_property(args, input_value)
    schedule = BudgetSchedule(args.budget_base, args.budget_slope)
    stream = run_stages(f, input_value, args.t_max, schedule)
    report = stabilization(stream, args.window)
    _emit(trace_lines(stream, report), args.output)
    return 0


def _run_namespace_from(entry: dict) -> argparse.Namespace:
    base = _env_budget_base()
    return argparse.Namespace(
        config=None,
        property=entry["property"],
        input=str(entry["input"]),
        t_max=int(entry.get("t_max", 64)),
        budget_base=int(entry.get("budget_base", base)),
        budget_slope=int(entry.get("budget_slope", DEFAULT_BUDGET_SLOPE)),
        window=int(entry.get("window", DEFAULT_STABILIZATION_WINDOW)),
        output=entry.get("output"),
        confirm_window=int(entry.get("confirm_window", DEFAULT_STABILIZATION_WINDOW)),
        g_bound=[int(v) for v in entry.get("g_bound", [8, 8, 1])],
        h_bound=[int(v) for v in entry.get("h_bound", [8, 8, 1])],
        class_a=entry.get("class_a"),
        class_b=entry.get("class_b"),
        src=entry.get("src"),
        candidates=entry.get("candidates"),
    )


def _certificate_record(cert: oracle.Certificate, extra: dict) -> str:
    payload = {
        "record": "certificate",
        "claim": cert.claim,
        "budget": str(cert.budget),
        "verdict": "confirmed" if cert.confirmed else "refuted",
        "undecided": [str(z) for z in cert.undecided],
    }
    if isinstance(cert.verdict, oracle.Refuted):
        payload["witness"] = str(cert.verdict.witness)
    payload.update(extra)
    return _record(payload)


def _cmd_oracle(args: argparse.Namespace) -> int:
    lines = []
    if args.oracle_op == "k":
        value = oracle.brute_k(args.x, args.budget)
        lines.append(
            _record(
                {
                    "record": "oracle",
                    "op": "k",
                    "input": str(args.x),
                    "budget": str(args.budget),
                    "value": str(value),
                }
            )
        )
    elif args.oracle_op == "incompressible":
        values = oracle.brute_incompressible(args.upto, args.budget)
        lines.append(
            _record(
                {
                    "record": "oracle",
                    "op": "incompressible",
                    "upto": str(args.upto),
                    "budget": str(args.budget),
                    "values": [str(v) for v in values],
                }
            )
        )
    elif args.oracle_op == "equal":
        cert = oracle.brute_equal_upto(args.i, args.j, args.n, args.budget)
        lines.append(
            _certificate_record(
                cert, {"op": "equal", "i": str(args.i), "j": str(args.j), "n": str(args.n)}
            )
        )
    elif args.oracle_op == "err":
        ratio = oracle.brute_err(args.i, args.j, args.t, args.budget)
        lines.append(
            _record(
                {
                    "record": "oracle",
                    "op": "err",
                    "i": str(args.i),
                    "j": str(args.j),
                    "t": str(args.t),
                    "budget": str(args.budget),
                    "ratio": f"{ratio.numerator}/{ratio.denominator}",
                }
            )
        )
    _emit(lines, args.output)
    return 0


_SYMBOL_NAMES = {0: "_", 1: "0", 2: "1"}
_MOVE_NAMES = {0: "L", 1: "R"}


def _cmd_inspect(args: argparse.Namespace) -> int:
    index = args.index
    program = index_to_program(index)
    kind = decode_program(program)
    print(f"index {index}")
    print(f'program "{program}"')
    if isinstance(kind, Literal):
        print(f"literal, payload {kind.payload}")
    elif isinstance(kind, Diverger):
        reason = "empty program" if program == "" else "malformed or literal with no digits"
        print(f"diverger ({reason})")
    else:
        table = kind.states
        print(f"table, {table.k} states")
        for state in range(1, table.k + 1):
            for symbol in (0, 1, 2):
                write, move, nxt = table.record(state, symbol)
                target = "halt" if nxt == 0 else f"state {nxt}"
                print(
                    f"  state {state} on {_SYMBOL_NAMES[symbol]}:"
                    f" write {_SYMBOL_NAMES[write]}, move {_MOVE_NAMES[move]}, {target}"
                )
    print(f"empty-tape trace (first {args.trace_steps} steps):")
    for step, cfg in enumerate(trace(index, None, args.trace_steps)):
        cells = "".join(
            _SYMBOL_NAMES[cfg.tape.get(c, 0)]
            for c in range(min(cfg.tape, default=0), max(cfg.tape, default=0) + 1)
        )
        print(f"  step {step}: state {cfg.state}, head {cfg.head}, tape '{cells}'")
    return 0


def _cmd_encode(args: argparse.Namespace) -> int:
    if args.encode_op == "pair":
        print(pair(args.values[0], args.values[1]))
    elif args.encode_op == "tuple":
        print(tuple_code(args.values))
    else:
        print(encode_prefix(args.values))
    return 0


def _cmd_decode(args: argparse.Namespace) -> int:
    if args.decode_op == "pair":
        x, y = unpair(args.code)
        print(x, y)
    elif args.decode_op == "tuple":
        print(*tuple_decode(args.code, args.arity))
    else:
        print(*decode_prefix(args.code))
    return 0


def _sample_table(rng: random.Random, k: int):
    from .machine import StateTable

    rows = []
    for _ in range(k):
        row = []
        for _ in range(3):
            row.append((rng.randrange(3), rng.randrange(2), rng.randrange(k + 1)))
        rows.append(tuple(row))
    return StateTable(k, tuple(rows))


def _cmd_nf_check(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    checked = 0
    failures = 0
    attempts = 0
    while checked < args.samples and attempts < args.samples * 400:
        attempts += 1
        table = _sample_table(rng, rng.randrange(1, 4))
        index = table_index(table)
        results = [run(index, x, args.step_limit) for x in range(args.inputs)]
        if not all(isinstance(r, Halted) for r in results):
            continue
        ok = True
        for x, result in enumerate(results):
            h = histories.minimal_history(index, x, args.step_limit)
            if h is None or histories.history_output(h) != result.output:
                ok = False
                break
            if not histories.is_first_halting_history(index, x, h):
                ok = False
                break
            padded = histories.pad_history(h)
            if not histories.is_halting_history(index, x, padded):
                ok = False
                break
            if histories.is_first_halting_history(index, x, padded):
                ok = False
                break
        checked += 1
        if not ok:
            failures += 1
        verdict = "ok" if ok else "FAIL"
        print(
            f"machine {index}: halts on 0..{args.inputs - 1},"
            f" history output matches simulator: {verdict}"
        )
    print(f"checked {checked} machines, {failures} failures")
    return 0 if failures == 0 and checked == args.samples else 1


def _env_budget_base() -> int:
    raw = os.environ.get(BUDGET_BASE_ENV)
    if raw is None:
        return DEFAULT_BUDGET_BASE
    return int(raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="limitlab",
        description="run limit properties, certify them by brute force, and inspect the machine universe",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a property to a stage horizon and emit its trace")
    p_run.add_argument("property", nargs="?", choices=properties.PROPERTY_IDS)
    p_run.add_argument("input", nargs="?")
    p_run.add_argument("--t-max", type=_nat, default=64, dest="t_max")
    p_run.add_argument("--budget-base", type=_nat, default=_env_budget_base(), dest="budget_base")
    p_run.add_argument("--budget-slope", type=_nat, default=DEFAULT_BUDGET_SLOPE, dest="budget_slope")
    p_run.add_argument("--window", type=_nat, default=DEFAULT_STABILIZATION_WINDOW)
    p_run.add_argument("--confirm-window", type=_nat, default=DEFAULT_STABILIZATION_WINDOW, dest="confirm_window")
    p_run.add_argument("--g-bound", type=_nat, nargs=3, default=[8, 8, 1], dest="g_bound", metavar=("C0", "C1", "D"))
    p_run.add_argument("--h-bound", type=_nat, nargs=3, default=[8, 8, 1], dest="h_bound", metavar=("C0", "C1", "D"))
    p_run.add_argument("--class-a", type=_index_list, default=None, dest="class_a")
    p_run.add_argument("--class-b", type=_index_list, default=None, dest="class_b")
    p_run.add_argument("--src", type=_index_list, default=None)
    p_run.add_argument("--candidates", type=_index_list, default=None)
    p_run.add_argument("--output", default=None)
    p_run.add_argument("--config", default=None)
    p_run.set_defaults(handler=_cmd_run)

    p_oracle = sub.add_parser("oracle", help="emit brute-force certificates")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_op", required=True)
    p_k = oracle_sub.add_parser("k")
    p_k.add_argument("x", type=_nat)
    p_k.add_argument("--budget", type=_nat, default=2000)
    p_inc = oracle_sub.add_parser("incompressible")
    p_inc.add_argument("upto", type=_nat)
    p_inc.add_argument("--budget", type=_nat, default=2000)
    p_eq = oracle_sub.add_parser("equal")
    p_eq.add_argument("i", type=_nat)
    p_eq.add_argument("j", type=_nat)
    p_eq.add_argument("--n", type=_nat, default=64)
    p_eq.add_argument("--budget", type=_nat, default=2000)
    p_err = oracle_sub.add_parser("err")
    p_err.add_argument("i", type=_nat)
    p_err.add_argument("j", type=_nat)
    p_err.add_argument("--t", type=_nat, default=30)
    p_err.add_argument("--budget", type=_nat, default=2000)
    for p in (p_k, p_inc, p_eq, p_err):
        p.add_argument("--output", default=None)
    p_oracle.set_defaults(handler=_cmd_oracle)

    p_inspect = sub.add_parser("inspect", help="describe one machine")
    p_inspect.add_argument("index", type=_nat)
    p_inspect.add_argument("--trace-steps", type=_nat, default=8, dest="trace_steps")
    p_inspect.set_defaults(handler=_cmd_inspect)

    p_encode = sub.add_parser("encode", help="pairing and prefix codes")
    p_encode.add_argument("encode_op", choices=("pair", "tuple", "prefix"))
    p_encode.add_argument("values", type=_nat, nargs="+")
    p_encode.set_defaults(handler=_cmd_encode)

    p_decode = sub.add_parser("decode", help="invert pairing and prefix codes")
    p_decode.add_argument("decode_op", choices=("pair", "tuple", "prefix"))
    p_decode.add_argument("code", type=_nat)
    p_decode.add_argument("--arity", type=_nat, default=2)
    p_decode.set_defaults(handler=_cmd_decode)

    p_nf = sub.add_parser("nf-check", help="halting-history agreement suite")
    p_nf.add_argument("--samples", type=_nat, default=25)
    p_nf.add_argument("--seed", type=_nat, default=0)
    p_nf.add_argument("--step-limit", type=_nat, default=12, dest="step_limit")
    p_nf.add_argument("--inputs", type=_nat, default=6)
    p_nf.set_defaults(handler=_cmd_nf_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
