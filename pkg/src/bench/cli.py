"""
WaveBench CLI
`wavebench <comm|sense|complexity> [--config FILE] [--out DIR] [--seed N] [--plot]`
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Sequence

from src.bench.config import BenchConfig, load_config, parse_config
from src.bench.runner import EXIT_CONFIG, run
from src.core.config import settings
from src.core.exceptions import ConfigurationError
from src.core.logger import error_message, setup_logging


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wavebench",
        description="Benchmark wave-domain and circuit-domain transceiver architectures",
    )
    p.add_argument("experiment", choices=("comm", "sense", "complexity"), help="Case study to run")
    p.add_argument("--config", type=Path, default=None, help="Experiment file (key = value lines)")
    p.add_argument("--out", type=Path, default=None, help="Output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, default=None, help="Base seed (overrides the file)")
    p.add_argument("--plot", action="store_true", help="Also render an SVG plot")
    return p


def resolve(args: argparse.Namespace) -> BenchConfig:
    """Config file plus command-line overrides."""
    config = load_config(args.config) if args.config else parse_config("")
    updates: dict = {"experiment": args.experiment}
    if args.out is not None:
        updates["output_dir"] = args.out
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigurationError("--seed must be >= 0", f"got {args.seed}")
        updates["seed"] = args.seed
    if args.plot:
        updates["plot"] = True
    return config.model_copy(update=updates)


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    setup_logging(level=settings.log_level)
    try:
        config = resolve(args)
    except ConfigurationError as exc:
        error_message(str(exc))
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
