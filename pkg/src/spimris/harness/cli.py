"""Command-line interface: run scenarios, list them, summarize result CSVs.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import ConfigError, NumericError
from .config import parse_scenario_file
from .runner import run_scenario
from .scenarios import get_scenario, list_scenarios
from .summarize import SUMMARY_HEADER, summarize_csv

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spimris",
        description="Monte Carlo harness for SPIM over RIS-aided massive MIMO",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write CSV results")
    run.add_argument("--scenario", required=True, help="built-in name or file path")
    run.add_argument("--trials", type=int, default=None, help="override trial count")
    run.add_argument("--seed", type=int, default=None, help="override master seed")
    run.add_argument("--out", default="results", help="output directory")
    run.add_argument("--workers", type=int, default=1, help="parallel worker count")
    run.add_argument(
        "--dump-channels", action="store_true", help="also dump per-trial paths"
    )

    sub.add_parser("list-scenarios", help="print the built-in scenario names")

    summ = sub.add_parser("summarize", help="aggregate a results CSV to stdout")
    summ.add_argument("--in", dest="input", required=True, help="results CSV path")
    return parser


def _load_scenario(ref: str):
    path = Path(ref)
    if path.suffix or path.exists():
        return parse_scenario_file(path)
    return get_scenario(ref)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list-scenarios":
            for name in list_scenarios():
                print(name)
            return 0
        if args.command == "summarize":
            print(SUMMARY_HEADER)
            for row in summarize_csv(args.input):
                lo, hi = row.ci95
                print(
                    f"{row.scenario},{row.sweep_name},{row.sweep_value},"
                    f"{row.method},{row.n},{row.mean_se:.10g},{row.std_se:.10g},"
                    f"{lo:.10g},{hi:.10g}"
                )
            return 0
        # run
        cfg = _load_scenario(args.scenario)
        if args.seed is not None:
            from dataclasses import replace

            cfg = replace(cfg, seed=args.seed)
        path = run_scenario(
            cfg,
            args.out,
            trials=args.trials,
            workers=args.workers,
            dump_channels=args.dump_channels,
        )
        print(path)
        return 0
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
