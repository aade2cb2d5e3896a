"""Adaptive Heun time stepping and the simulation driver."""

from cmfe_gelation.integrator.controls import StepControls
from cmfe_gelation.integrator.exceptions import (
    CMFEControlsError,
    CMFEInadmissibleModelError,
    CMFEIntegratorException,
    CMFENumericalError,
)
from cmfe_gelation.integrator.run import LEDGER_NAMES, MOMENT_NAMES, SimulationResult, run
from cmfe_gelation.integrator.stepper import StepOutcome, StepSize, active_cells, select_dt, step

__all__ = [
    "CMFEControlsError",
    "CMFEInadmissibleModelError",
    "CMFEIntegratorException",
    "CMFENumericalError",
    "LEDGER_NAMES",
    "MOMENT_NAMES",
    "SimulationResult",
    "StepControls",
    "StepOutcome",
    "StepSize",
    "active_cells",
    "run",
    "select_dt",
    "step",
]
