"""
APEX DualBounds - command-line entry point.

Runs a dual-bound experiment and writes CSV and JSON reports. Progress and
solver diagnostics go to the log file inside --out; stdout carries only the
path of the CSV report.

Usage:
    python main.py run --config table51.toml --seed 7 --out results/
    python main.py run --config sweep.toml --seed 7 --out results/ --threads 8 --penalties zero,t1,t2

Exit codes:
    0  every cell completed
    1  configuration error
    2  at least one cell failed
"""

import argparse
import logging
import sys
from pathlib import Path

from config import settings
from errors import ArgumentError, ConfigError
from models.bounds import PenaltyKind
from models.experiment import MAX_SEED, load_config
from observability.run_trace import clear_recorder, compute_hash, get_run_trace_recorder
from workflows.experiment import run_experiment
from workflows.reporting import ReportFormat, emit_report

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_PARTIAL_FAILURE = 2

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors are configuration errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_CONFIG_ERROR)


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _penalties(text: str) -> list[PenaltyKind]:
    try:
        return [PenaltyKind.parse(part) for part in text.split(",") if part.strip()]
    except ArgumentError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dualbounds", description="Dual bounds for the dynamic trading benchmark")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = commands.add_parser("run", help="Run an experiment config")
    run.add_argument("--config", required=True, type=Path, help="TOML or JSON experiment config")
    run.add_argument("--seed", required=True, type=_seed, help="Master seed (u64)")
    run.add_argument("--out", required=True, type=Path, help="Output directory")
    run.add_argument("--threads", type=int, default=None, help="Worker threads")
    run.add_argument(
        "--penalties", type=_penalties, default=None, help="Comma list of zero,t1,t2,lqc"
    )
    return parser


def configure_logging(directory: Path) -> None:
    """Route all logging to the run's log file and to stderr."""
    directory.mkdir(parents=True, exist_ok=True)
    formatter = logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s")
    handlers: list[logging.Handler] = [
        logging.FileHandler(directory / settings.log_file, encoding="utf-8"),
        logging.StreamHandler(sys.stderr),
    ]
    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    root.setLevel(getattr(logging, settings.log_level.upper(), logging.INFO))


def run_command(args: argparse.Namespace) -> int:
    """Execute `run`, returning the exit code."""
    out: Path = args.out
    try:
        configure_logging(out)
    except OSError as e:
        sys.stderr.write(f"cannot use output directory {out}: {e}\n")
        return EXIT_CONFIG_ERROR

    try:
        config = load_config(args.config).with_overrides(seed=args.seed, penalties=args.penalties)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_CONFIG_ERROR
    if args.threads is not None and args.threads < 1:
        sys.stderr.write("--threads must be >= 1\n")
        return EXIT_CONFIG_ERROR

    run_id = compute_hash({"config": config.to_json(), "seed": config.run.seed})
    recorder = get_run_trace_recorder(run_id, out)
    recorder.record_run_start(config.model_dump(mode="json", by_alias=True))
    logger.info(f"Run {run_id}: {len(config.cells())} cells, seed {config.run.seed}")

    try:
        result = run_experiment(config, workers=args.threads, recorder=recorder)
        csv_path = emit_report(result.rows, ReportFormat.CSV, out / config.output.csv_name)
        emit_report(result.rows, ReportFormat.JSON, out / config.output.json_name)
    finally:
        clear_recorder(run_id)

    failed = len(result.failed)
    recorder.record_run_complete(
        {"cells": len(result.rows), "failed": failed},
        status="completed" if not failed else "partial",
    )
    print(csv_path)
    return EXIT_OK if not failed else EXIT_PARTIAL_FAILURE


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run_command(args)
    return EXIT_CONFIG_ERROR


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
