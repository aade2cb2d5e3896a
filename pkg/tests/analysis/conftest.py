import numpy as np
import pytest

from cmfe_gelation.grid import build_grid, moment
from cmfe_gelation.integrator import LEDGER_NAMES, SimulationResult, StepControls
from cmfe_gelation.kernels import validate_model


@pytest.fixture
def make_result():
    """
    Build a SimulationResult from recorded densities without integrating.

    Moments are computed from the densities; ledger series default to zero.
    """

    def factory(model, densities, times, grid=None, initial=None, **ledger):
        grid = grid or build_grid(1e-1, 1e1, 10)
        times = np.asarray(times, dtype=float)
        densities = np.broadcast_to(np.asarray(densities, dtype=float), (times.size, grid.size)).copy()
        exponents = {"N0": 0.0, "N1": 1.0, "Nm_sigma": -model.sigma, "Nm_2sigma": -2.0 * model.sigma}
        return SimulationResult(
            grid=grid,
            model=model,
            controls=StepControls(t_end=float(times[-1])),
            admissibility=validate_model(model),
            times=times,
            moments={name: np.array([moment(row, grid, p) for row in densities]) for name, p in exponents.items()},
            ledger={name: np.asarray(ledger.get(name, np.zeros(times.size)), dtype=float) for name in LEDGER_NAMES},
            densities=densities,
            initial=initial or {"kind": "exponential", "amplitude": 1.0, "scale": 1.0},
        )

    return factory
