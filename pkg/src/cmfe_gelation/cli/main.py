"""
``cmfe-gelation`` command line entry point.

.. code-block:: console

    cmfe-gelation [--debug|--quiet] simulate CONFIG
    cmfe-gelation bounds CONFIG
    cmfe-gelation check CONFIG
    cmfe-gelation converge CONFIG [--top-edge M ...]
    cmfe-gelation verify [CONFIG] [--suite NAME ...] [--output DIR]

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 bound or acceptance violation.
"""

import argparse
import sys
from logging import getLogger
from typing import Optional, Sequence

from cmfe_gelation import __version__
from cmfe_gelation.cli.commands import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    cmd_bounds,
    cmd_check,
    cmd_converge,
    cmd_simulate,
    cmd_verify,
)
from cmfe_gelation.cli.config import parse_config
from cmfe_gelation.exceptions import CMFEException
from cmfe_gelation.integrator import CMFENumericalError
from cmfe_gelation.logging import setup_logging

LOG = getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="cmfe-gelation",
        description="Sectional solver and gelation-bound checks for coagulation with multiple fragmentation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--debug", action="store_true", help="Print debug messages.")
    verbosity.add_argument("--quiet", action="store_true", help="Print errors only.")

    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Integrate the configured model and write moments and ledger.")
    simulate.add_argument("config", help="TOML configuration, or an echoed resolved_config.json.")

    bounds = commands.add_parser("bounds", help="Evaluate the gelation bound curves and a-priori constants.")
    bounds.add_argument("config")

    check = commands.add_parser("check", help="Report which standing assumptions the model satisfies.")
    check.add_argument("config")

    converge = commands.add_parser("converge", help="Refinement sweep over top edges and gel-time extrapolation.")
    converge.add_argument("config")
    converge.add_argument(
        "--top-edge",
        dest="top_edges",
        action="append",
        type=float,
        help="Top edge of one refinement level. Repeat for each level. Defaults to analysis.top_edges.",
    )

    verify = commands.add_parser("verify", help="Run the acceptance suites.")
    verify.add_argument("config", nargs="?", help="Optional configuration supplying output directory and workers.")
    verify.add_argument("--suite", dest="suites", action="append", help="Run only this suite. Repeatable.")
    verify.add_argument("--output", dest="directory", help="Output directory.")
    return parser


def _dispatch(args) -> int:
    if args.command == "verify":
        config = parse_config(args.config, validate=False) if args.config else None
        return cmd_verify(config, suites=args.suites, directory=args.directory)

    if args.command == "check":
        status, report = cmd_check(parse_config(args.config, validate=False))
        print(report.summary())
        return status

    config = parse_config(args.config)
    if args.command == "simulate":
        result = cmd_simulate(config)
        print(
            f"t = {result.final_time:g}: N1 = {result.moments['N1'][-1]:.10g}, "
            f"gel = {result.ledger['gel_mass'][-1]:.6g}, dust = {result.ledger['dust_mass'][-1]:.6g} "
            f"in {result.steps} steps"
        )
    elif args.command == "bounds":
        report = cmd_bounds(config)
        print(f"{len(report.curves)} bound curves, N1 limit {report.cmfe_limit:.10g}")
    elif args.command == "converge":
        estimate = cmd_converge(config, levels=args.top_edges)
        print(estimate if estimate is not None else "fewer than 3 levels, no extrapolation")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run the command and map errors to exit codes.

    :param argv: Arguments without the program name. ``sys.argv[1:]`` by default.
    :return: Exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_USAGE
    setup_logging(debug=args.debug, quiet=args.quiet)

    try:
        return _dispatch(args)
    except CMFENumericalError as err:
        LOG.error(err)
        return EXIT_NUMERICAL
    except (CMFEException, OSError) as err:
        LOG.error(err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
