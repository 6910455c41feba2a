"""Command-line entry point.

Subcommands: check (differential campaign), sample (print generated
expressions), validate (parse and validate a signature), bench
(trials-to-failure statistics for a suite's bug variants), summarize
(render a report file).  Exit codes: 0 success, 1 at least one
observational mismatch, 2 usage, parse, or validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .generator import GenConfig, Rng, gen_expr, mix_seed
from .harness import bench_trials_to_failure, run_differential
from .report import (
    BenchLine,
    ReportFormatError,
    emit_bench,
    emit_campaign,
    parse_report,
    property_name,
    summarize,
)
from .sigdsl import (
    ParseError,
    Signature,
    ValidationError,
    parse_signature,
    parse_ty,
    render_ty,
    validate_signature,
)
from .suite import SuiteEntry, UnknownNameError, get_implementation, get_suite, list_suites
from .symexpr import to_text

_DEFAULT_TRIALS = 1000
_DEFAULT_MAX_SIZE = 30
_DEFAULT_SEQ_PROB = 0.25
_DEFAULT_RUNS = 1000
_DEFAULT_TRIAL_CAP = 10000


class CliError(Exception):
    """A user-facing error that maps to exit code 2."""


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse exits 2 on usage errors, 0 on --help
        return 0 if exit_.code in (0, None) else 2
    try:
        return args.handler(args)
    except (CliError, UnknownNameError, ParseError, ValidationError, ReportFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specdiff",
        description="Differential property testing of module implementations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a differential campaign")
    _add_sig_source(check)
    check.add_argument("--impl-a", required=True, help="first implementation name")
    check.add_argument("--impl-b", required=True, help="second implementation name")
    check.add_argument("--trials", type=int, default=_DEFAULT_TRIALS)
    check.add_argument("--seed", type=int, default=None, help="campaign seed (default 0 or SPECDIFF_SEED)")
    check.add_argument("--max-size", type=int, default=_DEFAULT_MAX_SIZE)
    check.add_argument("--seq-prob", type=float, default=_DEFAULT_SEQ_PROB)
    check.add_argument("--report", default=None, help="JSONL report path ('-' for stdout)")
    check.add_argument("--stop-on-failure", action="store_true")
    check.set_defaults(handler=_cmd_check)

    sample = sub.add_parser("sample", help="print generated expressions")
    _add_sig_source(sample)
    sample.add_argument("--type", required=True, help="target type, e.g. bool or 'int list'")
    sample.add_argument("--count", type=int, default=10)
    sample.add_argument("--size", type=int, default=10)
    sample.add_argument("--seed", type=int, default=None)
    sample.add_argument("--seq-prob", type=float, default=_DEFAULT_SEQ_PROB)
    sample.set_defaults(handler=_cmd_sample)

    validate = sub.add_parser("validate", help="parse and validate a signature")
    _add_sig_source(validate)
    validate.set_defaults(handler=_cmd_validate)

    bench = sub.add_parser("bench", help="trials-to-failure stats for a suite's bugs")
    bench.add_argument("--suite", required=True)
    bench.add_argument("--runs", type=int, default=_DEFAULT_RUNS)
    bench.add_argument("--trial-cap", type=int, default=_DEFAULT_TRIAL_CAP)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--output", default=None, help="bench JSONL path ('-' for stdout)")
    bench.set_defaults(handler=_cmd_bench)

    summ = sub.add_parser("summarize", help="render a report file as a table")
    summ.add_argument("--report", required=True)
    summ.set_defaults(handler=_cmd_summarize)

    return parser


def _add_sig_source(cmd: argparse.ArgumentParser) -> None:
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", help="bundled suite name")
    group.add_argument("--sig", help="path to a .sig file")


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("SPECDIFF_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"SPECDIFF_SEED is not an integer: {env!r}") from None


def _load_signature(args) -> tuple[SuiteEntry | None, Signature]:
    """Resolve --suite/--sig to a validated Signature and its suite, if any."""
    if args.suite is not None:
        entry = get_suite(args.suite)
        validate_signature(entry.signature)
        return entry, entry.signature
    sig = parse_signature(Path(args.sig).read_text("utf-8"))
    validate_signature(sig)
    for entry in list_suites():
        if entry.signature == sig:
            return entry, sig
    return None, sig


def _cmd_validate(args) -> int:
    _, sig = _load_signature(args)
    report = validate_signature(sig)
    shape = "mutable" if sig.mutable else "immutable"
    print(f"signature {sig.name}: {len(sig.ops)} ops, {shape}")
    print("observable types: " + ", ".join(render_ty(t) for t in report.observable_types))
    return 0


def _cmd_sample(args) -> int:
    _, sig = _load_signature(args)
    ty = parse_ty(args.type)
    seed = _resolve_seed(args.seed)
    cfg = GenConfig(max_size=args.size, seq_probability=args.seq_prob, seed=seed)
    for i in range(args.count):
        e = gen_expr(ty, args.size, sig, cfg, Rng(mix_seed(seed, i)))
        print(to_text(e))
    return 0


def _cmd_check(args) -> int:
    entry, sig = _load_signature(args)
    if entry is None:
        raise CliError(
            f"no implementations registered for signature {sig.name!r}; "
            "use a bundled suite"
        )
    impl_a = get_implementation(entry.name, args.impl_a)
    impl_b = get_implementation(entry.name, args.impl_b)
    seed = _resolve_seed(args.seed)
    cfg = GenConfig(max_size=args.max_size, seq_probability=args.seq_prob, seed=seed)
    result = run_differential(
        sig, impl_a, impl_b, args.trials, cfg, stop_on_failure=args.stop_on_failure
    )

    report_to_stdout = args.report == "-"
    if args.report is not None:
        if report_to_stdout:
            emit_campaign(result, sys.stdout.buffer)
            sys.stdout.buffer.flush()
        else:
            with open(args.report, "wb") as sink:
                emit_campaign(result, sink)

    say = (lambda *a: print(*a, file=sys.stderr)) if report_to_stdout else print
    for record, shrunk in result.failures:
        prop = property_name(sig.name, render_ty(record.observable_type))
        say(f"FAIL trial {record.trial_index + 1} [{prop}] {record.expr_text}")
        say(f"  {impl_a.name}: {record.outcome_a}")
        say(f"  {impl_b.name}: {record.outcome_b}")
        say(f"  shrunk: {shrunk}")
    for record in result.records:
        if record.status == "harness_bug":
            say(f"HARNESS BUG trial {record.trial_index + 1}: {record.detail}")
    say(
        f"{result.total_trials} trials, {len(result.failures)} failures"
        + (f", {result.harness_bugs} harness bugs" if result.harness_bugs else "")
    )
    if result.harness_bugs:
        return 2
    return 1 if result.failures else 0


def _cmd_bench(args) -> int:
    entry = get_suite(args.suite)
    validate_signature(entry.signature)
    if not entry.bug_variants:
        raise CliError(f"suite {entry.name!r} has no bug variants to bench")
    seed = _resolve_seed(args.seed)
    reference = get_implementation(entry.name, entry.reference)

    lines: list[BenchLine] = []
    sinks = []
    output_to_stdout = args.output == "-"
    out = None
    try:
        if args.output is not None and not output_to_stdout:
            out = open(args.output, "wb")
            sinks.append(out)
        if output_to_stdout:
            sinks.append(sys.stdout.buffer)
        for bug_name in entry.bug_variants:
            buggy = get_implementation(entry.name, bug_name)
            stats = bench_trials_to_failure(
                entry.signature, reference, buggy, args.runs, args.trial_cap, seed
            )
            prop = property_name(entry.name, bug_name)
            for sink in sinks:
                emit_bench(prop, stats, seed, sink)
            for run, first in enumerate(stats.first_failures):
                lines.append(
                    BenchLine(
                        property=prop,
                        run=run,
                        trials_to_failure=first,
                        seed=seed + run,
                    )
                )
    finally:
        if out is not None:
            out.close()
        if output_to_stdout:
            sys.stdout.buffer.flush()

    table = summarize(lines)
    if output_to_stdout:
        print(table, file=sys.stderr, end="")
    else:
        print(table, end="")
    return 0


def _cmd_summarize(args) -> int:
    parsed = parse_report(Path(args.report).read_text("utf-8"))
    print(summarize(parsed.trials + parsed.benches), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
