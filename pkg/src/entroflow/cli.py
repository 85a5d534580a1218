"""Command-line entry point.

    entroflow run --config <path> [--out <dir>] [--format csv|json]
    entroflow verify [--out <dir>]

Exit codes: 0 success, 2 invalid config, 3 numerical failure (or verify
finding an unexpected invariant violation).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .experiments.config import ConfigError, load_config
from .experiments.runner import NUMERICAL_ERRORS, run_experiment
from .experiments.verify import run_verify

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entroflow",
        description="Constrained entropy-relaxation experiments on exponential families.")
    parser.add_argument("--version", action="version", version=f"entroflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment from a config file")
    run_p.add_argument("--config", required=True, help="path to the experiment config")
    run_p.add_argument("--out", default="results", help="output directory (default: results)")
    run_p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="table format, overrides the config's output.format")

    ver_p = sub.add_parser("verify", help="run the full invariant suite")
    ver_p.add_argument("--out", default=None,
                       help="also write the JSON/text report into this directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        try:
            cfg = load_config(args.config)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            return run_experiment(cfg, args.out, args.format)
        except NUMERICAL_ERRORS as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL

    report = run_verify()
    print(report.render_text())
    if args.out:
        path = report.write(args.out)
        print(f"wrote {path}")
    return EXIT_OK if report.ok() else EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
