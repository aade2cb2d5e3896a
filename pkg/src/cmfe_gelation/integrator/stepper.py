"""
Adaptive Heun (explicit trapezoidal) stepping.
"""

import os
import tempfile
from dataclasses import dataclass
from logging import getLogger
from typing import Optional

import numpy as np

from cmfe_gelation.grid import DensityState, Grid
from cmfe_gelation.integrator.controls import StepControls
from cmfe_gelation.integrator.exceptions import CMFENumericalError
from cmfe_gelation.scheme import RhsBundle, SectionalScheme

LOG = getLogger(__name__)

DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class StepSize:
    """Proposed step and whether it hit ``dt_min``."""

    dt: float
    stiff: bool = False


@dataclass(frozen=True)
class StepOutcome:
    """Result of one accepted step."""

    state: DensityState
    dt: float
    stiff: bool = False
    retries: int = 0
    clamped_cells: int = 0


def active_cells(state: DensityState, controls: StepControls, grid: Optional[Grid] = None) -> np.ndarray:
    """
    Cells that limit the step: occupied and holding at least ``activity_floor``
    of the mass. Without a grid the share is measured on densities.
    """
    g = state.g
    share = g * grid.widths * grid.mean_masses if grid is not None else g
    total = float(np.sum(share)) if grid is not None else float(np.max(g, initial=0.0))
    if total <= 0:
        return g > 0
    return (g > 0) & (share >= controls.activity_floor * total)


def select_dt(
    state: DensityState, bundle: RhsBundle, controls: StepControls, grid: Optional[Grid] = None
) -> StepSize:
    """
    Step size from the relative rates of the active cells.

    ``dt = min(theta / max |dgdt_i| / g_i, stability / max loss_i / g_i)``,
    clamped to ``[dt_min, dt_max]``. A system at rest gets ``dt_max``.

    :param state: Current state.
    :param bundle: Its right-hand side.
    :param controls: Step controls.
    :param grid: Grid of the state, used to measure the mass share of cells.
    :rtype: StepSize
    """
    active = active_cells(state, controls, grid)
    g = np.maximum(state.g[active], DENSITY_FLOOR)
    change_rate = float(np.max(np.abs(bundle.dgdt[active]) / g, initial=0.0))
    loss_rate = float(np.max(bundle.loss[active] / g, initial=0.0))

    dt = controls.dt_max
    if change_rate > 0:
        dt = min(dt, controls.theta / change_rate)
    if loss_rate > 0:
        dt = min(dt, controls.stability / loss_rate)
    if dt < controls.dt_min:
        return StepSize(controls.dt_min, stiff=True)
    return StepSize(dt)


def _dump_state(state: DensityState) -> str:
    descriptor, path = tempfile.mkstemp(prefix="cmfe-state-", suffix=".npz")
    os.close(descriptor)
    np.savez(path, g=state.g, t=state.t, **state.ledger())
    return path


def _check_finite(bundle: RhsBundle, state: DensityState, where: str):
    if not bundle.finite:
        raise CMFENumericalError(f"Non-finite right-hand side {where} at t={state.t}", _dump_state(state))


def step(  # pylint: disable=too-many-arguments,too-many-locals
    state: DensityState,
    scheme: SectionalScheme,
    controls: StepControls,
    *,
    dt: Optional[float] = None,
    bundle: Optional[RhsBundle] = None,
    dt_limit: Optional[float] = None,
) -> StepOutcome:
    """
    One Heun step.

    With ``dt`` given the step is taken as is. Otherwise it comes from
    :func:`select_dt`, capped by ``dt_limit``, and is halved (down to
    ``dt_min``) while an active cell would drop below ``-clamp_tol`` times its
    old value. Remaining negative densities are set to zero and what that adds
    is booked in the clamp counters. Ledger entries advance with the same
    trapezoidal weights as the densities.

    :param state: Current state, nonnegative.
    :param scheme: Right-hand side on the state's grid.
    :param controls: Step controls.
    :param dt: Fixed step.
    :param bundle: Right-hand side at ``state`` if already known.
    :param dt_limit: Upper bound on the adaptive step, e.g. the time to the next record.
    :rtype: StepOutcome
    :raises CMFENumericalError: If a rate or the update is not finite.
    """
    grid = scheme.grid
    first = bundle if bundle is not None else scheme(state)
    _check_finite(first, state, "at step start")

    fixed = dt is not None
    stiff = False
    if not fixed:
        size = select_dt(state, first, controls, grid)
        dt, stiff = size.dt, size.stiff
        if dt_limit is not None and dt_limit < dt:
            dt, stiff = dt_limit, False

    g_old = state.g
    active = active_cells(state, controls, grid)
    retries = 0
    while True:
        predicted = state.replace(g=np.maximum(g_old + dt * first.dgdt, 0.0), t=state.t + dt)
        second = scheme(predicted)
        _check_finite(second, predicted, "at the predictor")

        g_new = g_old + 0.5 * dt * (first.dgdt + second.dgdt)
        if not np.all(np.isfinite(g_new)):
            raise CMFENumericalError(f"Non-finite density after a step of {dt} at t={state.t}", _dump_state(state))

        too_negative = active & (g_new < -controls.clamp_tol * g_old)
        if fixed or not np.any(too_negative) or dt <= controls.dt_min:
            break
        dt = max(0.5 * dt, controls.dt_min)
        retries += 1

    if np.any(too_negative):
        stiff = True
        LOG.warning("t=%.6g: clamping %d active cells at dt=%.3g", state.t, int(np.count_nonzero(too_negative)), dt)

    negative = g_new < 0
    deficit = np.where(negative, -g_new, 0.0) * grid.widths
    g_new = np.where(negative, 0.0, g_new)

    half = 0.5 * dt
    new_state = DensityState(
        g=g_new,
        t=state.t + dt,
        gel_mass=state.gel_mass + half * (first.gel_mass_rate + second.gel_mass_rate),
        dust_mass=state.dust_mass + half * (first.dust_mass_rate + second.dust_mass_rate),
        dust_number=state.dust_number + half * (first.dust_number_rate + second.dust_number_rate),
        clamp_mass=state.clamp_mass + float(np.dot(deficit, grid.mean_masses)),
        clamp_number=state.clamp_number + float(np.sum(deficit)),
    )
    return StepOutcome(new_state, dt, stiff=stiff, retries=retries, clamped_cells=int(np.count_nonzero(negative)))
