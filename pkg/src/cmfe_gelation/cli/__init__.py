"""Configuration, subcommands and result files."""

from cmfe_gelation.cli.commands import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VIOLATION,
    cmd_bounds,
    cmd_check,
    cmd_converge,
    cmd_simulate,
    cmd_verify,
)
from cmfe_gelation.cli.config import (
    AnalysisSettings,
    GridSettings,
    OutputSettings,
    RunConfig,
    config_from_dict,
    parse_config,
)
from cmfe_gelation.cli.exceptions import (
    CMFECliException,
    CMFEConfigError,
)

__all__ = [
    "AnalysisSettings",
    "CMFECliException",
    "CMFEConfigError",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_VIOLATION",
    "GridSettings",
    "OutputSettings",
    "RunConfig",
    "cmd_bounds",
    "cmd_check",
    "cmd_converge",
    "cmd_simulate",
    "cmd_verify",
    "config_from_dict",
    "parse_config",
]
