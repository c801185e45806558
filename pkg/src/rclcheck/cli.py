"""Command-line front end.

``rclcheck CONTRACT.rcl`` checks a contract file and reports the first
conflict with its trace.  Exit codes: 0 conflict-free, 1 conflicts found,
2 unreadable or unparsable input, 3 inconclusive (budget exhausted),
64 bad command line.

Subcommands ``generate`` and ``bench`` produce random contracts and CSV
benchmark records; ``check`` may be spelled explicitly.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .automaton import BuildOptions, SpecialLabel, export_dot, render_label
from .bench import BenchGroup, bench, write_csv
from .conflicts import CheckOutcome, ConflictReport, VerdictKind, run_check
from .generator import generate
from .parser import parse, render, render_formula

EXIT_CONFLICT_FREE = 0
EXIT_CONFLICTS = 1
EXIT_INPUT_ERROR = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would sys.exit(2)
        raise _UsageError(message)


def _check_parser() -> _Parser:
    p = _Parser(prog="rclcheck", description="Check an RCL contract for deontic conflicts.")
    p.add_argument("input", help="contract file")
    p.add_argument("-c", "--complete", action="store_true",
                   help="explore the whole automaton and report every conflict")
    p.add_argument("-g", "--dot", metavar="PATH",
                   help="export the constructed automaton to a DOT file")
    p.add_argument("-n", "--no-pruning", action="store_true",
                   help="enumerate all action combinations instead of the relevant ones")
    p.add_argument("-v", "--verbose", action="store_true",
                   help="also print state formulas and transition action sets")
    p.add_argument("--budget", type=int, metavar="N",
                   help="state and transition budget before giving up")
    return p


def _format_trace(report: ConflictReport) -> str:
    parts = [f"s{report.trace[0].state}"]
    for step in report.trace[1:]:
        parts.append(f"-T{step.via}->")
        parts.append(f"s{step.state}")
    return " ".join(parts)


def _print_report(report: ConflictReport, outcome: CheckOutcome, verbose: bool) -> None:
    print("Conflict found in the contract.")
    print(f"State: s{report.state}")
    print(f"Conflict between: {report.left_clause} AND {report.right_clause}")
    print(f"Trace: {_format_trace(report)}")
    if verbose:
        automaton = outcome.automaton
        for step in report.trace:
            print(f"  s{step.state}: {render_formula(automaton.formula_of(step.state))}")
            if step.via is not None:
                print(f"  T{step.via}: {render_label(step.label)}")


def _run_check(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    result = parse(text)
    for diag in result.diagnostics:
        print(f"{args.input}:{diag}", file=sys.stderr)
    if result.spec is None:
        return EXIT_INPUT_ERROR

    options = BuildOptions(complete=args.complete, no_pruning=args.no_pruning)
    if args.budget is not None:
        options = BuildOptions(
            complete=args.complete,
            no_pruning=args.no_pruning,
            max_states=args.budget,
            max_transitions=args.budget,
        )
    outcome = run_check(result.spec, options)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(export_dot(outcome.automaton, verbose=args.verbose))

    verdict = outcome.verdict
    if verdict.kind is VerdictKind.CONFLICT_FREE:
        print("No conflict detected.")
        return EXIT_CONFLICT_FREE
    if verdict.kind is VerdictKind.CONFLICTS:
        for i, report in enumerate(verdict.reports):
            if i:
                print()
            _print_report(report, outcome, args.verbose)
        return EXIT_CONFLICTS
    print(f"Verification inconclusive: {verdict.reason}")
    return EXIT_INCONCLUSIVE


def _generate_parser() -> _Parser:
    p = _Parser(prog="rclcheck generate", description="Generate a random RCL contract.")
    p.add_argument("--individuals", type=int, required=True)
    p.add_argument("--actions", type=int, required=True)
    p.add_argument("--clauses", type=int, default=3)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", help="write the contract here instead of stdout")
    return p


def _run_generate(args: argparse.Namespace) -> int:
    spec = generate(
        individuals=args.individuals,
        actions=args.actions,
        clauses=args.clauses,
        max_depth=args.max_depth,
        seed=args.seed,
    )
    text = render(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _bench_parser() -> _Parser:
    p = _Parser(prog="rclcheck bench",
                description="Check groups of random contracts and emit CSV records.")
    p.add_argument("--individuals", required=True,
                   help="count or inclusive range, e.g. 8 or 5..12")
    p.add_argument("--actions", required=True, help="count or inclusive range")
    p.add_argument("--clauses", type=int, default=3)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--runs", type=int, default=10, help="runs per group")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--budget", type=int, help="state and transition budget per run")
    p.add_argument("--time-limit", type=float, help="wall-clock limit per run, seconds")
    p.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    return p


def _run_bench(args: argparse.Namespace) -> int:
    groups = [
        BenchGroup(individuals=n, actions=m, clauses=args.clauses, max_depth=args.max_depth)
        for n in _parse_range(args.individuals)
        for m in _parse_range(args.actions)
    ]
    rows = bench(
        groups,
        runs_per_group=args.runs,
        base_seed=args.seed,
        budget=args.budget,
        time_limit=args.time_limit,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            write_csv(rows, handle)
    else:
        write_csv(rows, sys.stdout)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv and argv[0] in ("check", "generate", "bench") else "check"
    if argv and argv[0] == command and argv[0] in ("check", "generate", "bench"):
        argv = argv[1:]
    parsers = {
        "check": (_check_parser, _run_check),
        "generate": (_generate_parser, _run_generate),
        "bench": (_bench_parser, _run_bench),
    }
    make_parser, run = parsers[command]
    try:
        args = make_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        make_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # -h/--help
        return 0 if exc.code in (0, None) else EXIT_USAGE
    return run(args)


if __name__ == "__main__":
    raise SystemExit(main())
