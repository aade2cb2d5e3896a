"""
Simulation driver: steps a state from ``t = 0`` to the horizon and records
moments, the mass ledger and densities along the way.
"""

import time
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, Optional, Tuple, Union

import numpy as np

from cmfe_gelation.grid import DensityState, Grid, InitialDataSpec, init_density, moment
from cmfe_gelation.integrator.controls import StepControls
from cmfe_gelation.integrator.exceptions import CMFEInadmissibleModelError
from cmfe_gelation.integrator.stepper import step
from cmfe_gelation.kernels import AdmissibilityReport, KernelModel, validate_model
from cmfe_gelation.scheme import CoagTable, FragTable, SectionalScheme, cached_tables

LOG = getLogger(__name__)

MOMENT_NAMES = ("N0", "N1", "Nm_sigma", "Nm_2sigma")
LEDGER_NAMES = ("gel_mass", "dust_mass", "dust_number", "clamp_mass", "clamp_number")
# relative tolerance for landing on an output time
_TIME_SLACK = 1e-12


@dataclass
class SimulationResult:  # pylint: disable=too-many-instance-attributes
    """
    Recorded trajectory of one run.

    ``moments`` and ``ledger`` map a series name to one value per entry of
    ``times``. ``densities`` holds the cell densities at every record, one row
    per time. ``snapshots`` maps the configured snapshot times (and the final
    time) to cell densities.
    """

    grid: Grid
    model: KernelModel
    controls: StepControls
    admissibility: AdmissibilityReport
    times: np.ndarray
    moments: Dict[str, np.ndarray]
    ledger: Dict[str, np.ndarray]
    densities: np.ndarray
    snapshots: Dict[float, np.ndarray] = field(default_factory=dict)
    initial: Optional[dict] = None
    forced: bool = False
    truncated: bool = False
    stopped_early: bool = False
    steps: int = 0
    stiff_steps: int = 0
    retries: int = 0
    workers: int = 1
    wall_clock: float = 0.0

    @property
    def n1_initial(self) -> float:
        """Mass on the grid at ``t = 0``."""
        return float(self.moments["N1"][0])

    @property
    def final_time(self) -> float:
        """Time of the last record."""
        return float(self.times[-1])

    def state_at(self, index: int) -> DensityState:
        """State at the record ``index``."""
        return DensityState(
            g=self.densities[index],
            t=float(self.times[index]),
            **{name: float(self.ledger[name][index]) for name in LEDGER_NAMES},
        )

    def moment_series(self, p: float) -> np.ndarray:
        """Moment ``p`` at every record, from the stored densities."""
        return self.densities @ self.grid.power_integrals(p)

    def ledger_residual(self) -> np.ndarray:
        """
        Relative mass ledger defect ``|N1 + gel + dust - clamp - N1(0)| / N1(0)`` per record.
        """
        n1 = self.moments["N1"]
        total = n1 + self.ledger["gel_mass"] + self.ledger["dust_mass"] - self.ledger["clamp_mass"]
        scale = self.n1_initial if self.n1_initial > 0 else 1.0
        return np.abs(total - n1[0]) / scale

    @property
    def metadata(self) -> dict:
        """Run provenance for manifests."""
        return {
            "grid": self.grid.summary(),
            "model": self.model.to_dict(),
            "initial": self.initial,
            "controls": self.controls.to_dict(),
            "admissibility": self.admissibility.to_dict(),
            "forced": self.forced,
            "truncated": self.truncated,
            "stopped_early": self.stopped_early,
            "steps": self.steps,
            "stiff_steps": self.stiff_steps,
            "retries": self.retries,
            "workers": self.workers,
            "wall_clock": self.wall_clock,
        }


class _Recorder:
    def __init__(self, grid: Grid, model: KernelModel):
        self._grid = grid
        self._exponents = (0.0, 1.0, -model.sigma, -2.0 * model.sigma)
        self.times = []
        self.moments = {name: [] for name in MOMENT_NAMES}
        self.ledger = {name: [] for name in LEDGER_NAMES}
        self.densities = []
        self.snapshots = {}

    def record(self, state: DensityState):
        if self.times and state.t <= self.times[-1]:
            return
        self.times.append(state.t)
        for name, p in zip(MOMENT_NAMES, self._exponents):
            self.moments[name].append(moment(state, self._grid, p))
        for name, value in state.ledger().items():
            self.ledger[name].append(value)
        self.densities.append(np.array(state.g))
        LOG.debug(
            "t=%.6g N0=%.6g N1=%.6g gel=%.3g dust=%.3g",
            state.t,
            self.moments["N0"][-1],
            self.moments["N1"][-1],
            state.gel_mass,
            state.dust_mass,
        )

    def snapshot(self, state: DensityState):
        self.snapshots[float(state.t)] = np.array(state.g)


def _output_times(controls: StepControls) -> Tuple[np.ndarray, set]:
    t_end = controls.t_end
    count = int(np.floor(t_end / controls.record_every * (1.0 + _TIME_SLACK)))
    records = [k * controls.record_every for k in range(1, count + 1)]
    snapshots = {t for t in controls.snapshot_times if 0 < t <= t_end}
    times = np.unique(np.array(records + sorted(snapshots) + [t_end], dtype=float))
    return times[(times > 0) & (times <= t_end)], snapshots


def _same_time(a: float, b: float) -> bool:
    return abs(a - b) <= _TIME_SLACK * max(1.0, abs(b))


def run(  # pylint: disable=too-many-arguments,too-many-locals,too-many-branches,too-many-statements
    grid: Grid,
    model: KernelModel,
    initial: Union[InitialDataSpec, DensityState],
    controls: StepControls,
    *,
    force: bool = False,
    workers: int = 1,
    tables: Optional[Tuple[CoagTable, FragTable]] = None,
    cache_directory: Optional[str] = None,
) -> SimulationResult:
    """
    Integrate the truncated system from ``t = 0`` to ``controls.t_end``.

    Moments and the ledger are recorded at ``t = 0``, every ``record_every``,
    at the snapshot times and at the final time; steps are shortened to land on
    these times exactly. The result is identical for any ``workers``.

    :param grid: Mass grid.
    :param model: Rate-law parameters.
    :param initial: Initial data family, or an explicit state on ``grid``.
    :param controls: Step and output controls.
    :param force: Run even if the model fails admissibility. Recorded in the result.
    :param workers: Threads for the coagulation pair sum.
    :param tables: Prebuilt coagulation and breakup tables.
    :param cache_directory: diskcache directory for the tables.
    :rtype: SimulationResult
    :raises CMFEInadmissibleModelError: If the model fails admissibility and ``force`` is not set.
    :raises CMFENumericalError: If a step produces NaN or Inf.
    """
    report = validate_model(model)
    if not report.passed:
        failed = ", ".join(result.condition for result in report.failures)
        if not force:
            raise CMFEInadmissibleModelError(f"Model fails admissibility ({failed}); use force to run anyway")
        LOG.warning("Running an inadmissible model (%s) because force is set", failed)

    if isinstance(initial, DensityState):
        state, initial_description = initial.replace(t=0.0), {"kind": "state"}
    else:
        state, initial_description = init_density(grid, initial), initial.to_dict()

    if tables is None and cache_directory is not None:
        tables = cached_tables(grid, model, cache_directory)
    coag_table, frag_table = tables if tables is not None else (None, None)

    recorder = _Recorder(grid, model)
    recorder.record(state)
    if 0.0 in controls.snapshot_times:
        recorder.snapshot(state)

    output_times, snapshot_times = _output_times(controls)
    n1_initial = recorder.moments["N1"][0]
    gel_stop = None if controls.stop_gel_fraction is None else controls.stop_gel_fraction * n1_initial

    LOG.info("Starting run: %r, t_end=%g, workers=%d", grid, controls.t_end, workers)
    started = time.perf_counter()
    steps = stiff_steps = retries = 0
    truncated = stopped_early = False
    with SectionalScheme(grid, model, coag_table=coag_table, frag_table=frag_table, workers=workers) as scheme:
        for target in output_times:
            while not _same_time(state.t, target):
                if steps >= controls.max_steps:
                    truncated = True
                    break
                outcome = step(state, scheme, controls, dt_limit=target - state.t)
                state = outcome.state
                steps += 1
                retries += outcome.retries
                if outcome.stiff:
                    if not stiff_steps:
                        LOG.warning("Step size limited by dt_min=%g at t=%.6g", controls.dt_min, state.t)
                    stiff_steps += 1
                if gel_stop is not None and state.gel_mass >= gel_stop:
                    stopped_early = True
                    break
            if truncated or stopped_early:
                break
            state = state.replace(t=float(target))
            recorder.record(state)
            if any(_same_time(target, t) for t in snapshot_times):
                recorder.snapshot(state)

    recorder.record(state)
    recorder.snapshot(state)
    wall_clock = time.perf_counter() - started

    if truncated:
        LOG.warning("Run truncated after %d steps at t=%.6g of %g", steps, state.t, controls.t_end)
    if stopped_early:
        LOG.info("Gel mass reached %.3g of the initial mass at t=%.6g", controls.stop_gel_fraction, state.t)
    if stiff_steps:
        LOG.warning("%d of %d steps were limited by dt_min", stiff_steps, steps)
    LOG.info("Finished run at t=%.6g: %d steps, %.3f s", state.t, steps, wall_clock)

    return SimulationResult(
        grid=grid,
        model=model,
        controls=controls,
        admissibility=report,
        times=np.array(recorder.times),
        moments={name: np.array(values) for name, values in recorder.moments.items()},
        ledger={name: np.array(values) for name, values in recorder.ledger.items()},
        densities=np.array(recorder.densities).reshape(len(recorder.times), grid.size),
        snapshots=recorder.snapshots,
        initial=initial_description,
        forced=not report.passed,
        truncated=truncated,
        stopped_early=stopped_early,
        steps=steps,
        stiff_steps=stiff_steps,
        retries=retries,
        workers=workers,
        wall_clock=wall_clock,
    )
