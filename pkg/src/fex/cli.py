"""Command-line entry point.

Usage:
    fex bounds|alpha|chain|khinchin|sweep --config <path>
        [--out <path>] [--csv <path>] [--seed S] [--grid M] [--budget N]
        [--quiet]

Exit codes: 0 success, 1 config error, 2 budget or resolution guard,
3 a computed certificate violated an invariant (the report still says
which one).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .errors import BudgetError, ConfigError, ResolutionError
from .reports import (
    MODES,
    load_config,
    override_config,
    report_csv,
    report_json,
    run,
    validate_report,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fex",
        description="Construct and certify extension operators on finite abelian groups.",
    )
    subparsers = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sub = subparsers.add_parser(mode, help=f"run in {mode} mode")
        sub.add_argument("--config", required=True, help="path to a JSON config file")
        sub.add_argument("--out", help="write the JSON report here instead of stdout")
        sub.add_argument("--csv", help="also write a CSV summary here")
        sub.add_argument("--seed", type=int, help="override the config seed")
        sub.add_argument("--grid", type=int, help="override the phase-grid resolution M")
        sub.add_argument("--budget", type=int, help="override the iteration budget")
        sub.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config, mode=args.mode)
        config = override_config(
            config, seed=args.seed, resolution=args.grid, budget=args.budget
        )
    except (ConfigError, OSError) as exc:
        print(f"fex: config error: {exc}", file=sys.stderr)
        return 1

    if not args.quiet:
        print(f"fex: running mode={config.mode} M={config.resolution} seed={config.seed}",
              file=sys.stderr)

    try:
        report = run(config)
    except (BudgetError, ResolutionError) as exc:
        print(f"fex: guard error: {exc}", file=sys.stderr)
        return 2
    validate_report(report)

    text = report_json(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.csv:
        Path(args.csv).write_text(report_csv(report), encoding="utf-8")

    if report["violations"]:
        for message in report["violations"]:
            print(f"fex: certificate violation: {message}", file=sys.stderr)
        return 3
    if not args.quiet:
        print("fex: ok", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
