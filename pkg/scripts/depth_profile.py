#!/usr/bin/env python3
"""Depth and failure profile of one differential campaign.

Runs a single pairing for --trials trials, optionally saves the JSONL
report, and prints the summary table plus the depth histogram of every
generated expression.  Useful for eyeballing what the size schedule
actually produces.
"""

from __future__ import annotations

import argparse
import io
import sys

from specdiff.generator import GenConfig
from specdiff.harness import run_differential
from specdiff.report import emit_campaign, parse_report, summarize
from specdiff.suite import get_implementation, get_suite


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--suite", default="bst_map")
    parser.add_argument("--impl-a", default="correct")
    parser.add_argument("--impl-b", default="b1")
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-size", type=int, default=30)
    parser.add_argument("--seq-prob", type=float, default=0.25)
    parser.add_argument("--report", help="also write the JSONL report here")
    args = parser.parse_args(argv)

    entry = get_suite(args.suite)
    result = run_differential(
        entry.signature,
        get_implementation(args.suite, args.impl_a),
        get_implementation(args.suite, args.impl_b),
        trials=args.trials,
        cfg=GenConfig(
            max_size=args.max_size,
            seq_probability=args.seq_prob,
            seed=args.seed,
        ),
    )

    sink = io.BytesIO()
    emit_campaign(result, sink)
    text = sink.getvalue().decode("utf-8")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(text)
    print(
        f"{args.suite}: {args.impl_a} vs {args.impl_b}, "
        f"{result.total_trials} trials, {len(result.failures)} failures"
    )
    print(summarize(parse_report(text).trials))
    return 0


if __name__ == "__main__":
    sys.exit(main())
