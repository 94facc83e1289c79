# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Command-line entry point."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from src import __version__
from src.config import settings
from src.errors import (
    AtomGateError,
    ConfigError,
    ConvergenceError,
    InstabilityError,
    TargetNotReachedError,
)
from src.models.enums import Subcommand, SweepParameter
from src.schemas.config import ScenarioConfig
from src.services import config_service, scenario_service

logger = logging.getLogger("atomgate")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for ``atomgate <subcommand>``."""
    parser = argparse.ArgumentParser(
        prog="atomgate",
        description="Selective two-qubit gate on aperture-trapped neutral atoms.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "subcommand", choices=[s.value for s in Subcommand], help="What to run."
    )
    parser.add_argument(
        "--config", type=Path, help="Scenario TOML file; defaults apply when absent."
    )
    parser.add_argument("--out", type=Path, help="Output directory.")
    parser.add_argument(
        "--grid-points",
        type=int,
        help="Points per axis of the Step-1 grid; transport grids use "
        "grid.transport_points.",
    )
    parser.add_argument("--dt-tau", type=float, help="Real-time step in tau.")
    parser.add_argument(
        "--dim",
        type=int,
        choices=[1, 2, 3],
        help="Dimensionality of the Step-1 grid; transport grids use "
        "grid.transport_dim.",
    )
    parser.add_argument("--jobs", type=int, help="Worker processes for sweeps.")
    parser.add_argument(
        "--parameter",
        choices=[p.value for p in SweepParameter],
        help="Swept scalar (sweep only).",
    )
    parser.add_argument(
        "--values", type=float, nargs="+", help="Sweep values in input order."
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log at DEBUG level."
    )
    return parser


def load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    """Scenario file (or defaults) with command-line overrides applied."""
    cfg = config_service.load_config(args.config) if args.config else ScenarioConfig()
    return config_service.apply_overrides(
        cfg,
        **{
            "grid.points": args.grid_points,
            "grid.dim": args.dim,
            "propagator.dt_tau": args.dt_tau,
            "sweep.parameter": args.parameter,
            "sweep.jobs": args.jobs,
        },
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the subcommand and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_scenario(args)
        subcommand = Subcommand(args.subcommand)
        if subcommand == Subcommand.SWEEP:
            manifest = scenario_service.sweep(
                cfg, values=args.values, out=args.out, jobs=args.jobs
            )
        else:
            manifest = scenario_service.run_scenario(
                cfg, subcommand, out=args.out, jobs=args.jobs
            )
    except ConfigError as e:
        where = f" (line {e.line}, column {e.column})" if e.line is not None else ""
        logger.error(f"Configuration error{where}: {e}")
        return EXIT_CONFIG
    except (ConvergenceError, InstabilityError, TargetNotReachedError) as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except AtomGateError as e:
        logger.error(str(e))
        return EXIT_FAILURE
    for entry in manifest.files:
        print(entry.path)
    return EXIT_OK


def main() -> None:
    """Console-script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
