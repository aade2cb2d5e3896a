"""
Result files: CSV series, density snapshots, JSON documents and the manifest.

Series are RFC-4180 CSV with a header row and 17 significant digits, so
that a re-run from the echoed configuration can be compared byte for byte.
"""

import json
import os
import platform
from datetime import datetime, timezone
from logging import getLogger
from typing import Iterable, List, Optional, Sequence

import numpy as np

from cmfe_gelation import __version__
from cmfe_gelation.analysis import BoundsReport
from cmfe_gelation.fs import ensure_output_directory
from cmfe_gelation.integrator import SimulationResult

LOG = getLogger(__name__)

NUMBER_FORMAT = "%.17g"
MOMENT_COLUMNS = ("t", "N0", "N1", "Nm_sigma", "Nm_2sigma", "gel_mass", "dust_mass", "dust_number")
LEDGER_COLUMNS = ("t", "gel_mass", "dust_mass", "dust_number", "clamp_mass", "clamp_number", "ledger_residual")
SNAPSHOT_DIRECTORY = "snapshots"


def write_csv(path: str, columns: Sequence[str], rows) -> str:
    """
    Write a numeric table with a header row.

    :param path: Output file.
    :param columns: Column names.
    :param rows: Two-dimensional array, one row per line.
    :return: ``path``.
    """
    rows = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    np.savetxt(path, rows, delimiter=",", header=",".join(columns), comments="", fmt=NUMBER_FORMAT)
    LOG.debug("Wrote %d rows to %s", rows.shape[0], path)
    return path


def write_json(path: str, payload) -> str:
    """Write ``payload`` as indented JSON with sorted keys."""
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(payload, fp, indent=2, sort_keys=True, default=_json_default)
        fp.write("\n")
    return path


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def write_moments(result: SimulationResult, directory: str) -> str:
    """``moments.csv``: time, the four moments and the ledger."""
    columns = [result.times] + [result.moments[name] for name in MOMENT_COLUMNS[1:5]]
    columns += [result.ledger[name] for name in MOMENT_COLUMNS[5:]]
    return write_csv(os.path.join(directory, "moments.csv"), MOMENT_COLUMNS, np.column_stack(columns))


def write_ledger(result: SimulationResult, directory: str) -> str:
    """``ledger.csv``: the mass ledger and its relative closure defect."""
    columns = [result.times] + [result.ledger[name] for name in LEDGER_COLUMNS[1:6]] + [result.ledger_residual()]
    return write_csv(os.path.join(directory, "ledger.csv"), LEDGER_COLUMNS, np.column_stack(columns))


def snapshot_name(t: float) -> str:
    """File name of the snapshot at time ``t``."""
    return f"snapshot_t{t:.10g}.csv"


def write_snapshots(result: SimulationResult, directory: str) -> List[str]:
    """One ``pivot_mass,density`` file per snapshot under ``snapshots/``."""
    target = ensure_output_directory(os.path.join(directory, SNAPSHOT_DIRECTORY))
    paths = []
    for t, density in sorted(result.snapshots.items()):
        rows = np.column_stack([result.grid.pivots, density])
        paths.append(write_csv(os.path.join(target, snapshot_name(t)), ("pivot_mass", "density"), rows))
    return paths


def write_bounds(report: BoundsReport, directory: str, constants: Optional[dict] = None) -> List[str]:
    """
    ``bounds.csv`` with one column per curve plus ``cmfe_limit``, and ``constants.json``.

    :param constants: Document for ``constants.json``, the report itself by default.
    """
    names = sorted(report.curves)
    columns = [report.times] + [report.curves[name] for name in names]
    columns.append(np.full(report.times.shape, report.cmfe_limit))
    bounds_path = write_csv(
        os.path.join(directory, "bounds.csv"), ["t"] + names + ["cmfe_limit"], np.column_stack(columns)
    )
    constants = report.to_dict() if constants is None else constants
    return [bounds_path, write_json(os.path.join(directory, "constants.json"), constants)]


def build_manifest(  # pylint: disable=too-many-arguments
    command: str,
    config_hash: str,
    config: dict,
    admissibility: dict,
    wall_clock: float,
    *,
    files: Iterable[str] = (),
    partial: bool = False,
    verdicts: Optional[list] = None,
    extra: Optional[dict] = None,
) -> dict:
    """
    Provenance document of a command.

    Always names the code version, the config hash and the admissibility verdict.
    """
    manifest = {
        "version": __version__,
        "command": command,
        "created": datetime.now(timezone.utc).isoformat(),
        "python": platform.python_version(),
        "config_hash": config_hash,
        "config": config,
        "admissibility": admissibility,
        "admissible": admissibility.get("passed"),
        "wall_clock": wall_clock,
        "partial": partial,
        "files": sorted(os.path.basename(path) for path in files),
    }
    if verdicts is not None:
        manifest["verdicts"] = verdicts
    if extra:
        manifest.update(extra)
    return manifest
