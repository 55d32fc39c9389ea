"""Command line of the velocity-gauge workbench (via the vgwb command)."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from gauge_fields import FieldConfigurationError
from kinematics import KinematicsError
from lattice import LatticeError
from lie_algebra import LieAlgebraError
from noether import ReductionRegimeError

from .checks import SuiteReport, list_checks
from .config import ConfigError, ExperimentConfig, load_config
from .config_parser import ConfigSyntaxError
from .suites import algebra_suite, convergence_suite, dump_fields, reduce_akt, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _resolutions(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from error


def _seed(text: str) -> int:
    seed = int(text)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"the seed must be an unsigned 64-bit integer, got {text}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", action="store", type=Path, help="output directory")
    common.add_argument("--seed", action="store", type=_seed, help="override the configured seed")
    common.add_argument("--dump-fields", action="store_true", help="write field snapshots as CSV")

    parser = argparse.ArgumentParser(
        prog="vgwb", description="Velocity-space gauge fields and their Noether currents on a lattice."
    )
    parser.add_argument("--list-checks", action="store_true", help="print the check registry and exit")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command")
    algebra = commands.add_parser("verify-algebra", parents=[common], help="check the structure constants")
    algebra.add_argument("CONFIG", action="store", nargs="?", type=Path)
    run = commands.add_parser("run", parents=[common], help="run the configured suites")
    run.add_argument("CONFIG", action="store", type=Path)
    convergence = commands.add_parser("convergence", parents=[common], help="error ratios across resolutions")
    convergence.add_argument("CONFIG", action="store", type=Path)
    convergence.add_argument("--resolutions", action="store", type=_resolutions, default=[8, 16])
    reduce = commands.add_parser("reduce-akt", parents=[common], help="compare with the space-time gauge currents")
    reduce.add_argument("CONFIG", action="store", type=Path)
    return parser


def execute(args: argparse.Namespace) -> SuiteReport:
    """Run one subcommand and return its report; errors propagate."""
    if args.CONFIG is None:
        config = ExperimentConfig()
    else:
        config = load_config(args.CONFIG)
    config = config.with_overrides(seed=args.seed, output=args.out)
    report = SuiteReport(seed=config.seed, command=args.command)
    cfg = None
    match args.command:
        case "verify-algebra":
            algebra_suite(config.load_algebra(), report, config.output)
        case "run":
            cfg = run_suites(config, report, config.output)
        case "convergence":
            convergence_suite(config, args.resolutions, report, config.output)
        case "reduce-akt":
            cfg = config.build()
            reduce_akt(cfg, report)
    report.write(config.output)
    if args.dump_fields:
        dump_fields(cfg or config.build(), config.output / "fields")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    """Execute the workbench and return the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    if args.list_checks:
        print(list_checks().to_string(index=False))
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        report = execute(args)
    except (ConfigSyntaxError, ConfigError, ReductionRegimeError) as error:
        print(f"vgwb: {error}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as error:
        print(f"vgwb: cannot read {error.filename}: {error.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, KinematicsError, FieldConfigurationError, LieAlgebraError) as error:
        print(f"vgwb: invalid configuration: {error}", file=sys.stderr)
        return EXIT_USAGE
    print(report.summary(), end="")
    return EXIT_FAILED if report.exit_status else EXIT_OK
