"""
Subcommand implementations. Each takes a resolved :class:`RunConfig`, writes
its files into ``config.output.directory`` and a ``manifest.json`` next to them.
"""

import dataclasses
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from logging import getLogger
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cmfe_gelation.analysis import (
    BoundsReport,
    GelTimeEstimate,
    apriori_estimates,
    crossing_time,
    estimate_gel_time,
    initial_stats,
    theoretical_bounds,
)
from cmfe_gelation.analysis.geltime import MIN_LEVELS
from cmfe_gelation.cli.config import RunConfig
from cmfe_gelation.cli.exceptions import CMFEConfigError
from cmfe_gelation.cli.writers import (
    build_manifest,
    write_bounds,
    write_csv,
    write_json,
    write_ledger,
    write_moments,
    write_snapshots,
)
from cmfe_gelation.fs import ensure_output_directory
from cmfe_gelation.grid import init_density
from cmfe_gelation.integrator import CMFENumericalError, SimulationResult, run
from cmfe_gelation.kernels import AdmissibilityReport, validate_model
from cmfe_gelation.logging import add_file_handler, remove_handler

LOG = getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VIOLATION = 3


@contextmanager
def _run_log(directory: str):
    handler = add_file_handler(os.path.join(directory, "run.log"))
    try:
        yield
    finally:
        remove_handler(handler)


def _write_manifest(directory: str, config: RunConfig, command: str, report: AdmissibilityReport, started, **kwargs):
    manifest = build_manifest(
        command,
        config.config_hash(),
        config.resolved(),
        report.to_dict(),
        time.perf_counter() - started,
        **kwargs,
    )
    return write_json(os.path.join(directory, "manifest.json"), manifest)


def _simulate(config: RunConfig, directory: str) -> Tuple[SimulationResult, List[str]]:
    result = run(
        config.grid.build(),
        config.model,
        config.initial,
        config.controls,
        force=config.analysis.force,
        workers=config.workers,
        cache_directory=config.output.cache_dir,
    )
    files = [write_moments(result, directory), write_ledger(result, directory)]
    files += write_snapshots(result, directory)
    return result, files


def cmd_simulate(config: RunConfig) -> SimulationResult:
    """
    Run the simulation and write ``moments.csv``, ``ledger.csv``,
    ``snapshots/*.csv``, ``resolved_config.json`` and the manifest.

    A numerical failure still writes a manifest, flagged partial.

    :raises CMFENumericalError: If the run produced NaN or Inf.
    """
    directory = ensure_output_directory(config.output.directory)
    started = time.perf_counter()
    report = validate_model(config.model)
    files = [write_json(os.path.join(directory, "resolved_config.json"), config.resolved())]
    with _run_log(directory):
        try:
            result, written = _simulate(config, directory)
        except CMFENumericalError as err:
            _write_manifest(
                directory,
                config,
                "simulate",
                report,
                started,
                files=files,
                partial=True,
                extra={"error": str(err), "state_dump": err.dump_path},
            )
            raise
    files += written
    _write_manifest(
        directory,
        config,
        "simulate",
        report,
        started,
        files=files,
        partial=result.truncated,
        extra={"run": result.metadata},
    )
    LOG.info("Wrote %d files to %s", len(files) + 1, directory)
    return result


def _bound_times(config: RunConfig) -> np.ndarray:
    if config.analysis.bound_times is not None:
        return np.asarray(config.analysis.bound_times, dtype=float)
    controls = config.controls
    count = int(math.floor(controls.t_end / controls.record_every + 1e-9))
    return np.unique(np.append(np.arange(count + 1) * controls.record_every, controls.t_end))


def cmd_bounds(config: RunConfig) -> BoundsReport:
    """
    Evaluate the gelation bounds on the configured initial data and write
    ``bounds.csv``, ``constants.json`` (with the a-priori constants) and the manifest.

    :raises CMFEHypothesisError: If the model does not satisfy the bound hypotheses.
    """
    directory = ensure_output_directory(config.output.directory)
    started = time.perf_counter()
    grid = config.grid.build()
    model = config.model
    stats = initial_stats(init_density(grid, config.initial), grid, model, p=config.analysis.p)
    branches = None
    if config.analysis.bounds is not None:
        branches = [name for name in config.analysis.bounds if name != "cmfe_limit"]
    report = theoretical_bounds(
        model, stats, p=config.analysis.p, delta=config.analysis.delta, times=_bound_times(config), branches=branches
    )
    admissibility = validate_model(model)
    constants = {"bounds": report.to_dict(), "initial": stats.to_dict()}
    if config.controls.t_end > 0 and (admissibility.passed or config.analysis.force):
        constants["apriori"] = apriori_estimates(
            model,
            stats.q,
            stats.n1_in,
            config.controls.t_end,
            config.analysis.lambda_cut,
            force=config.analysis.force,
        ).to_dict()
    files = write_bounds(report, directory, constants)
    _write_manifest(directory, config, "bounds", admissibility, started, files=files, extra={"constants": constants})
    return report


def cmd_check(config: RunConfig) -> Tuple[int, AdmissibilityReport]:
    """
    Admissibility report of the configured model.

    :return: Exit status, zero iff every condition holds, and the report.
    """
    directory = ensure_output_directory(config.output.directory)
    started = time.perf_counter()
    report = validate_model(config.model)
    for line in report.summary().splitlines():
        LOG.info(line)
    files = [write_json(os.path.join(directory, "admissibility.json"), report.to_dict())]
    _write_manifest(directory, config, "check", report, started, files=files)
    return (EXIT_OK if report.passed else EXIT_VIOLATION), report


def cmd_converge(config: RunConfig, levels: Optional[Sequence[float]] = None) -> Optional[GelTimeEstimate]:
    """
    Run the configuration on increasing top edges, in parallel, and extrapolate the gel time.

    Writes ``level_<k>/moments.csv`` and ``level_<k>/ledger.csv`` per level,
    ``gel_time.csv`` (level, top edge, crossing time) and the manifest.

    :param config: Resolved configuration.
    :param levels: Top edges, ``analysis.top_edges`` by default.
    :return: The estimate, ``None`` with fewer than three levels.
    :raises CMFEConfigError: With fewer than two levels.
    """
    levels = sorted(levels if levels is not None else (config.analysis.top_edges or ()))
    if len(levels) < 2:
        raise CMFEConfigError(f"{config.source}: [analysis] top_edges: converge needs at least 2 levels, got {levels}")
    directory = ensure_output_directory(config.output.directory)
    started = time.perf_counter()

    def level_run(index_and_edge):
        index, top_edge = index_and_edge
        level_config = config.replace(grid=dataclasses.replace(config.grid, m_max=top_edge))
        level_directory = ensure_output_directory(os.path.join(directory, f"level_{index}"))
        result, _ = _simulate(level_config, level_directory)
        return result

    with _run_log(directory), ThreadPoolExecutor(max_workers=min(len(levels), os.cpu_count() or 1)) as executor:
        results = list(executor.map(level_run, enumerate(levels)))

    tolerance = config.analysis.gel_tolerance
    crossings = [crossing_time(result, tolerance) for result in results]
    rows = [
        (index, edge, np.nan if crossing is None else crossing)
        for index, (edge, crossing) in enumerate(zip(levels, crossings))
    ]
    files = [write_csv(os.path.join(directory, "gel_time.csv"), ("level", "top_edge", "t_cross"), rows)]

    estimate = estimate_gel_time(results, tolerance) if len(results) >= MIN_LEVELS else None
    if estimate is not None:
        LOG.info("Gel time: %s", estimate)
    _write_manifest(
        directory,
        config,
        "converge",
        results[0].admissibility,
        started,
        files=files,
        partial=any(result.truncated for result in results),
        extra={
            "levels": [{"top_edge": edge, **result.metadata} for edge, result in zip(levels, results)],
            "gel_time": None if estimate is None else estimate.to_dict(),
        },
    )
    return estimate


def cmd_verify(
    config: Optional[RunConfig] = None,
    suites: Optional[Sequence[str]] = None,
    directory: Optional[str] = None,
) -> int:
    """
    Run the acceptance suites, each under its wall-clock limit, and write the
    per-suite verdicts into the manifest.

    :param config: Supplies the output directory and the worker count of the determinism suite.
    :param suites: Suite names, all by default.
    :param directory: Output directory overriding the configured one.
    :return: Zero iff every suite passed.
    """
    # pylint: disable=import-outside-toplevel
    from cmfe_gelation.verification import run_suites

    directory = ensure_output_directory(directory or (config.output.directory if config else "cmfe-verify"))
    started = time.perf_counter()
    workers = max(2, config.workers) if config else 4
    with _run_log(directory):
        verdicts = run_suites(suites, workers=workers)
    passed = all(verdict.passed for verdict in verdicts)
    manifest = build_manifest(
        "verify",
        config.config_hash() if config else "",
        config.resolved() if config else {},
        {"passed": None},
        time.perf_counter() - started,
        verdicts=[verdict.to_dict() for verdict in verdicts],
        extra={"passed": passed},
    )
    write_json(os.path.join(directory, "manifest.json"), manifest)
    LOG.info("%d of %d suites passed", sum(verdict.passed for verdict in verdicts), len(verdicts))
    return EXIT_OK if passed else EXIT_VIOLATION


__all__ = [
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_VIOLATION",
    "cmd_bounds",
    "cmd_check",
    "cmd_converge",
    "cmd_simulate",
    "cmd_verify",
]
