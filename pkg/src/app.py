"""
Command-line entry point for the extremal-polynomial laboratory.
"""

import argparse
from typing import List, Optional

from api.experiments import run_experiment_handler
from api.presets import list_presets


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extremal-lab", description="Extremal polynomial experiments")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the sweeps of a config file")
    run.add_argument("config", help="Path to the config JSON document")
    run.add_argument("--out", default=None, help="Output directory (overrides config outputs)")
    run.add_argument("--jobs", type=int, default=None, help="Sweeps run concurrently")

    presets = commands.add_parser("list-presets", help="List geometry presets and density kinds")
    presets.add_argument("--json", action="store_true", help="Machine-readable output")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Route a command line to its handler.

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)

    if args.command == "run":
        return run_experiment_handler(args.config, out_dir=args.out, jobs=args.jobs)
    if args.command == "list-presets":
        print(list_presets(as_json=args.json))
        return 0
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
