"""CLI entrypoint for SemiLab.

Subcommands: ``verify <scenario>``, ``spectrum`` and ``trajectory``.
Exit codes: 0 when every assertion passes, 1 on an assertion failure,
2 on a configuration, input or I/O error.
"""
import argparse
import os
import sys
from typing import List, Optional

# Add the parent directory to sys.path
sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(__file__))))

from cli.verify import EXIT_ERROR, VerifyCLI
from config.run_config import ALL_SCENARIOS, EVALUATORS, build_run_config
from config.settings import get_config
from core.errors import SemilabError
from core.scenarios import SCENARIOS
from utils.logging import configure_logger

# Flags shared by every subcommand; ``dest`` matches the config-file key.
FLAG_KEYS = (
    "dim", "dims", "grid", "omega", "lambda", "mu", "seed", "trials", "tol",
    "out", "format", "evaluator", "index", "amplitude", "log_level",
)


def _common_flags() -> argparse.ArgumentParser:
    config = get_config()
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="Flat 'key = value' config file (flags override it)")
    parent.add_argument("--dim", help=f"Truncation dimension N (default: {config['defaults']['dim']})")
    parent.add_argument("--dims", help="Comma-separated dimensions for the spectrum sweep")
    parent.add_argument("--grid", help=f"Time grid start:stop:step (default: {config['defaults']['grid']})")
    parent.add_argument("--omega", help="Comma-separated frequencies; use --omega=-1,2 for a leading minus")
    parent.add_argument("--lambda", dest="lambda", help="Hilbert control frequencies")
    parent.add_argument("--mu", help="Hilbert control damping rates (first must be 0)")
    parent.add_argument("--seed", help=f"Sampling seed (default: {config['sampling']['seed']})")
    parent.add_argument("--trials", help=f"Sampled unit vectors (default: {config['sampling']['trials']})")
    parent.add_argument("--tol", help="eq_tol value, or name=value pairs over eq_tol, argmax_tol, spectral_tol")
    parent.add_argument("--out", help=f"Report directory (default: {config['output']['dir']})")
    parent.add_argument("--format", help="Comma-separated report formats among json, csv")
    parent.add_argument("--evaluator", choices=EVALUATORS, help="Semigroup evaluator override")
    parent.add_argument("--index", help="1-based basis index for the trajectory")
    parent.add_argument("--amplitude", help="Amplitude of the l1 semigroup (1 is isometric)")
    parent.add_argument(
        "--log-level",
        dest="log_level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help=f"Set logging level (default: {config['logging']['level']})"
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with its subcommands."""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="semilab",
        description="SemiLab: numerical certification of contraction and isometric semigroups"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="Run one scenario, or all of them")
    verify.add_argument(
        "scenario",
        nargs="?",
        choices=sorted(SCENARIOS) + [ALL_SCENARIOS],
        help="Scenario name (may come from --config instead)"
    )
    commands.add_parser("spectrum", parents=[common], help="Spurious-zero sweep over --dims")
    commands.add_parser("trajectory", parents=[common], help="Sample <T_t e_k, e*_k> along --grid")
    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments.

    Returns:
        Parsed arguments.
    """
    return build_parser().parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI; returns the exit code."""
    args = parse_args(argv)
    values = vars(args)
    flags = {key: values.get(key) for key in FLAG_KEYS}
    flags["scenario"] = values.get("scenario") if args.command == "verify" else args.command

    try:
        config = build_run_config(flags, args.config)
    except SemilabError as e:
        logger = configure_logger("semilab", args.log_level)
        logger.error(f"{type(e).__name__}: {e}")
        print(f"❌ configuration: {type(e).__name__}: {e}")
        return EXIT_ERROR

    return VerifyCLI(config).run()


if __name__ == "__main__":
    sys.exit(main())
