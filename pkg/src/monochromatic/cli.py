"""Command-line interface.

Exit status: 0 on success, 1 when the domain question stays open or has a
negative answer (budget exhausted, no witness, monochromatic instance
found, simulation failure), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import IO, Sequence

from .cnf import export_cnf
from .fs import find_divisible, finite_sums
from .pattern import format_pattern, instantiate, read_coloring, resolve_pattern
from .search import Avoiding, Forced, find_avoiding, find_witness, rado_number, verify_avoidance
from .simulate import ProofTrace, load_rule, simulate

DEFAULT_BUDGET = 50_000_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _csv(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monochromatic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("table", "json"), default="table")

    def budget(p: argparse.ArgumentParser) -> None:
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                       help="search node limit (default %(default)s)")

    p = sub.add_parser("search", help="look for an avoiding coloring of [1, N]")
    p.add_argument("--pattern", required=True, help="pattern text, or @preset")
    p.add_argument("--colors", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    budget(p)
    p.add_argument("--distinct", action="store_true", help="require distinct term values")
    fmt(p)

    p = sub.add_parser("rado", help="compute the forcing number")
    p.add_argument("--pattern", required=True)
    p.add_argument("--colors", type=_positive, required=True)
    p.add_argument("--n-max", type=_positive, required=True)
    budget(p)
    p.add_argument("--distinct", action="store_true")
    fmt(p)

    p = sub.add_parser("witness", help="least monochromatic instance in a coloring file")
    p.add_argument("--coloring-file", required=True)
    p.add_argument("--pattern", required=True)
    fmt(p)

    p = sub.add_parser("verify", help="check that a coloring file avoids the pattern")
    p.add_argument("--coloring-file", required=True)
    p.add_argument("--pattern", required=True)

    p = sub.add_parser("fs", help="finite sums of a sequence")
    p.add_argument("--xs", type=_csv, required=True)
    p.add_argument("--divisible-by", type=_positive)

    p = sub.add_parser("simulate", help="run the IP-set descent on a coloring rule")
    p.add_argument("--rule-file", required=True)
    p.add_argument("--seed-xs", type=_csv, required=True)
    p.add_argument("--stage-lengths", type=_csv, required=True)
    budget(p)
    fmt(p)

    p = sub.add_parser("cnf", help="write the avoidance problem as DIMACS CNF")
    p.add_argument("--pattern", required=True)
    p.add_argument("--colors", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--out", required=True)
    return parser


def _emit(out: IO[str], doc: dict) -> None:
    out.write(json.dumps(doc, indent=2) + "\n")


def _table(out: IO[str], rows: Sequence[tuple[str, object]]) -> None:
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        out.write(f"{key:<{width}}  {value}\n")


def _cmd_search(args: argparse.Namespace, out: IO[str]) -> int:
    p = resolve_pattern(args.pattern).with_distinct(args.distinct)
    outcome = find_avoiding(p, args.colors, args.n, args.budget)
    kind = {Avoiding: "avoiding", Forced: "forced"}.get(type(outcome), "unknown")
    coloring = outcome.coloring if isinstance(outcome, Avoiding) else None
    lower = getattr(outcome, "best_lower_bound", None)
    if args.format == "json":
        _emit(out, {
            "pattern": format_pattern(p), "colors": args.colors, "n": args.n,
            "outcome": kind, "coloring": list(coloring.colors) if coloring else None,
            "nodes": outcome.nodes, "lower_bound": lower,
        })
    else:
        # the table doubles as a coloring file when the outcome is avoiding
        notes = [f"pattern: {format_pattern(p)}", f"colors: {args.colors}  n: {args.n}",
                 f"outcome: {kind}", f"nodes: {outcome.nodes}"]
        if lower is not None:
            notes.append(f"lower_bound: {lower}")
        if coloring:
            out.write(coloring.to_text(notes))
        else:
            out.write("".join(f"# {line}\n" for line in notes))
    return 1 if kind == "unknown" else 0


def _cmd_rado(args: argparse.Namespace, out: IO[str]) -> int:
    p = resolve_pattern(args.pattern).with_distinct(args.distinct)
    result = rado_number(p, args.colors, args.n_max, args.budget)
    doc = result.to_json()
    if args.format == "json":
        _emit(out, doc)
    else:
        coloring = doc["avoiding_coloring"]
        _table(out, [
            ("pattern", doc["pattern"]),
            ("colors", doc["colors"]),
            ("forcing_n", "-" if doc["forcing_n"] is None else doc["forcing_n"]),
            ("lower_bound", doc["lower_bound"]),
            ("avoiding_coloring", "-" if coloring is None else " ".join(map(str, coloring))),
            ("nodes", doc["nodes"]),
            ("method", doc["method"]),
        ])
    return 0 if result.forcing_n is not None else 1


def _cmd_witness(args: argparse.Namespace, out: IO[str]) -> int:
    p = resolve_pattern(args.pattern)
    c = read_coloring(args.coloring_file)
    hit = find_witness(c, p)
    if args.format == "json":
        if hit is None:
            _emit(out, {"pattern": format_pattern(p), "found": False})
        else:
            asg, color = hit
            _emit(out, {"pattern": format_pattern(p), "found": True, "assignment": asg,
                        "values": sorted(instantiate(p, asg)), "color": color})
    elif hit is None:
        out.write("no monochromatic instance\n")
    else:
        asg, color = hit
        _table(out, [*asg.items(),
                     ("values", " ".join(map(str, sorted(instantiate(p, asg))))),
                     ("color", color)])
    return 0 if hit else 1


def _cmd_verify(args: argparse.Namespace, out: IO[str]) -> int:
    p = resolve_pattern(args.pattern)
    c = read_coloring(args.coloring_file)
    if verify_avoidance(c, p):
        out.write(f"avoiding: no monochromatic instance of {format_pattern(p)} in [1, {c.n}]\n")
        return 0
    asg, color = find_witness(c, p)
    shown = " ".join(f"{k}={v}" for k, v in asg.items())
    values = ",".join(map(str, sorted(instantiate(p, asg))))
    out.write(f"monochromatic: {shown} values {{{values}}} color {color}\n")
    return 1


def _cmd_fs(args: argparse.Namespace, out: IO[str]) -> int:
    if args.divisible_by is None:
        _emit(out, finite_sums(args.xs).to_json())
        return 0
    hit = find_divisible(args.xs, args.divisible_by)
    doc = {"xs": [str(x) for x in args.xs], "divisor": str(args.divisible_by),
           "indices": None, "value": None}
    if hit is not None:
        doc["indices"], doc["value"] = list(hit[0]), str(hit[1])
    _emit(out, doc)
    return 0 if hit else 1


def _cmd_simulate(args: argparse.Namespace, out: IO[str]) -> int:
    rule = load_rule(args.rule_file)
    result = simulate(rule, args.seed_xs, args.stage_lengths, args.budget)
    if args.format == "json":
        _emit(out, result.to_json())
    elif isinstance(result, ProofTrace):
        rows: list[tuple[str, object]] = []
        for s in result.stages:
            y = "-" if s.y is None else s.y
            rows.append((f"stage {s.n}", f"y={y} color={s.color} sequence={list(s.sequence)} "
                                         f"fs_size={s.fs_size} d_size={s.d_size}"))
        j, n, k = result.pigeonhole
        w = result.witness
        rows += [("pigeonhole", f"j={j} n={n} k={k}"),
                 ("witness", f"a={w.a} b={w.b} values={list(w.values)} color={w.color}"),
                 ("verified", str(result.verified).lower())]
        _table(out, rows)
    else:
        _table(out, [("failure", result.reason), ("stage", result.stage), ("detail", result.detail)])
    return 0 if result.verified else 1


def _cmd_cnf(args: argparse.Namespace, out: IO[str]) -> int:
    p = resolve_pattern(args.pattern)
    cnf = export_cnf(p, args.colors, args.n)
    cnf.write(args.out)
    out.write(f"wrote {args.out}: {cnf.num_vars} variables, {len(cnf.clauses)} clauses\n")
    return 0


COMMANDS = {
    "search": _cmd_search, "rado": _cmd_rado, "witness": _cmd_witness, "verify": _cmd_verify,
    "fs": _cmd_fs, "simulate": _cmd_simulate, "cnf": _cmd_cnf,
}


def run(argv: Sequence[str], out: IO[str] | None = None, err: IO[str] | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (ValueError, OSError, KeyError) as exc:
        err.write(f"{args.command}: error: {exc}\n")
        return 2


def main() -> int:
    return run(sys.argv[1:])
