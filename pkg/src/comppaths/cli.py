"""Command-line interface.

Exit codes: 0 success, 1 no conversion found, 2 parse error, 3 ill-formed
path, 4 law failure.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from collections import Counter
from typing import Callable, Iterable, Iterator

from . import corpus
from .export import (
    derivation_record,
    dumps,
    law_record,
    sequence_records,
)
from .faults import corrupted
from .laws import (
    GapReport,
    LawReport,
    check_2cat_vertical,
    check_groupoid,
    check_hcomp,
    check_interchange,
    check_pentagon,
    check_triangle,
)
from .paths import parse_path, path_of_conversion, print_path, skeleton, well_formed
from .rewrite import (
    STRATEGIES,
    BudgetExceeded,
    CapExceeded,
    RwRule,
    format_trace,
    rewrite_graph,
    rw_normalize,
)
from .rewrite2 import TwoCell
from .terms import ParseError, conversion_search, format_position, parse_term, print_term

EXIT_OK, EXIT_NO_CONVERSION, EXIT_PARSE, EXIT_ILL_FORMED, EXIT_LAW = 0, 1, 2, 3, 4


def _read_arg(text: str) -> str:
    """``@file`` reads the file as UTF-8, anything else is taken literally."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return text


def _emit(records: Iterable[dict]) -> None:
    for rec in records:
        print(dumps(rec))


# ---------------------------------------------------------------- commands


def cmd_path(args: argparse.Namespace) -> int:
    try:
        m = parse_term(_read_arg(args.source))
        n = parse_term(_read_arg(args.target))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    conv = conversion_search(m, n, args.fuel)
    if conv is None:
        print(f"no conversion found within {args.fuel} steps per side", file=sys.stderr)
        return EXIT_NO_CONVERSION
    path = path_of_conversion(conv)
    if args.format == "machine":
        _emit([derivation_record(conv, path)])
        return EXIT_OK
    ascii_ = args.ascii
    print(skeleton(path, ascii_) if args.style == "skeleton"
          else print_path(path, args.style, ascii_))
    lam = "\\" if ascii_ else "λ"
    for step in conv.steps:
        arrow = "->" if step.forward else "<-"
        print(f"  {step.kind.value} @ {format_position(step.pos) or 'root'} : "
              f"{print_term(step.src, lam)} {arrow} {print_term(step.dst, lam)}")
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> int:
    try:
        p = parse_path(_read_arg(args.path))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if not well_formed(p):
        print("ill-formed path: the arms of some tau do not meet", file=sys.stderr)
        return EXIT_ILL_FORMED
    try:
        nf, trace = rw_normalize(p, args.strategy, args.seed)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_ILL_FORMED
    if args.dot:
        try:
            graph = rewrite_graph(p)
        except CapExceeded as exc:
            print(f"no graph written: {exc}", file=sys.stderr)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(graph.to_dot() + "\n")
    if args.format == "machine":
        _emit(sequence_records(trace) + [{"type": "normal-form", "path": print_path(nf),
                                          "strategy": args.strategy, "seed": args.seed}])
        return EXIT_OK
    print(print_path(nf, args.style, args.ascii) if args.style != "skeleton"
          else skeleton(nf, args.ascii))
    if trace.steps:
        print(format_trace(trace))
    return EXIT_OK


Check = Callable[[tuple], list[LawReport]]


def _suites(seed: int, size: int, depth: int) -> dict[str, tuple[Iterator[tuple], Check]]:
    small = min(depth, 3)
    return {
        "groupoid": (corpus.groupoid_instances(seed, size, depth), lambda i: check_groupoid(*i)),
        "vertical": (corpus.vertical_instances(seed, size, depth),
                     lambda i: check_2cat_vertical(*i)),
        "interchange": (corpus.interchange_instances(seed, size, depth),
                        lambda i: [check_interchange(*i)]),
        "hcomp": (corpus.chain_instances(seed, size, 3, small), lambda i: check_hcomp(*i)),
        "pentagon": (corpus.chain_instances(seed, size, 4, small),
                     lambda i: [check_pentagon(*i)]),
        "triangle": (corpus.chain_instances(seed, size, 2, depth),
                     lambda i: [check_triangle(*i)]),
    }


SUITE_NAMES = ("groupoid", "vertical", "interchange", "hcomp", "pentagon", "triangle")


def cmd_check(args: argparse.Namespace) -> int:
    names = SUITE_NAMES if args.laws == "all" else tuple(args.laws.split(","))
    unknown = [n for n in names if n not in SUITE_NAMES]
    if unknown:
        print(f"unknown law suite(s): {', '.join(unknown)}", file=sys.stderr)
        return EXIT_PARSE
    suites = _suites(args.seed, args.size, args.depth)
    failed = False
    gaps = GapReport()
    for name in names:
        instances, check = suites[name]
        tally: Counter[tuple[str, bool]] = Counter()
        for index, inst in enumerate(instances):
            try:
                reports = check(inst)
            except (ValueError, BudgetExceeded) as exc:
                reports = [LawReport(name, inst, None, False, f"check raised: {exc}")]
            for rep in reports:
                tally[rep.law, rep.verdict] += 1
                gaps.add(rep)
                failed |= not rep.verdict
                if args.format == "machine":
                    _emit([law_record(rep, args.seed, index)])
                elif not rep.verdict and not rep.gap:
                    print(f"FAIL {rep.law} #{index}: {rep.detail}")
                    for x in rep.instance:
                        print(f"    {x.digest() if isinstance(x, TwoCell) else print_path(x)}")
        laws = sorted({law for law, _ in tally})
        for law in laws:
            line = f"{name}/{law}: {tally[law, True]} pass, {tally[law, False]} fail"
            if args.format == "machine":
                _emit([{"type": "summary", "suite": name, "law": law,
                        "pass": tally[law, True], "fail": tally[law, False]}])
            else:
                print(line)
    if gaps.reports:
        if args.format == "machine":
            _emit([{"type": "gap", "law": r.law, "detail": r.detail,
                    "cells": [c.digest() for c in r.witness]} for r in gaps.reports])
        else:
            print(gaps.render())
    return EXIT_LAW if failed else EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.size <= 0 or args.depth <= 0:
        print("size and depth must be positive", file=sys.stderr)
        return EXIT_PARSE
    for p in corpus.gen_corpus(args.seed, args.size, args.depth):
        if args.format == "machine":
            _emit([{"type": "path", "path": print_path(p), "source": print_term(p.src),
                    "target": print_term(p.dst)}])
        else:
            print(print_path(p) if args.style == "compact"
                  else print_path(p, args.style, args.ascii))
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--ascii", action="store_true", help="ASCII names instead of Greek")
    common.add_argument("--corrupt-rule", choices=[r.value for r in RwRule],
                        help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="comppaths",
        description="Computational paths between lambda terms and their rewriting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("path", parents=[common],
                       help="derive a path between two terms")
    p.add_argument("source", help="term text, or @file")
    p.add_argument("target", help="term text, or @file")
    p.add_argument("--fuel", type=int, default=100)
    p.add_argument("--style", choices=("paper", "compact", "congruence", "skeleton"),
                   default="paper")
    p.set_defaults(func=cmd_path)

    n = sub.add_parser("normalize", parents=[common],
                       help="rw-normalize a path and print the trace")
    n.add_argument("path", help="path text, or @file")
    n.add_argument("--strategy", choices=STRATEGIES, default="leftmost-outermost")
    n.add_argument("--style", choices=("compact", "paper", "congruence", "skeleton"),
                   default="compact")
    n.add_argument("--dot", metavar="FILE", help="write the rewrite graph as DOT")
    n.set_defaults(func=cmd_normalize)

    c = sub.add_parser("check", parents=[common], help="check laws on a seeded corpus")
    c.add_argument("--laws", default="groupoid",
                   help=f"comma-separated subset of {','.join(SUITE_NAMES)}, or all")
    c.add_argument("--size", type=int, default=100)
    c.add_argument("--depth", type=int, default=4)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", parents=[common], help="print a seeded random path corpus")
    g.add_argument("--size", type=int, default=20)
    g.add_argument("--depth", type=int, default=8)
    g.add_argument("--style", choices=("compact", "paper"), default="compact")
    g.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    guard = corrupted(args.corrupt_rule) if args.corrupt_rule else contextlib.nullcontext()
    try:
        with guard:
            return args.func(args)
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
