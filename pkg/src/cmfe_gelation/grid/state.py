"""
Piecewise-constant density state and its moments.
"""

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from cmfe_gelation.grid.exceptions import CMFEGridError
from cmfe_gelation.grid.grid import Grid


@dataclass(frozen=True)
class DensityState:  # pylint: disable=too-many-instance-attributes
    """
    Number density per cell plus the mass ledger.

    ``gel_mass`` is the mass that left through the top edge by coagulation,
    ``dust_mass`` and ``dust_number`` are fragments that fell below the bottom
    edge. ``clamp_mass`` and ``clamp_number`` count what clamping tiny negative
    densities to zero added back, so that the ledger
    ``N1 + gel_mass + dust_mass - clamp_mass`` stays equal to the initial mass.
    """

    g: np.ndarray
    t: float = 0.0
    gel_mass: float = 0.0
    dust_mass: float = 0.0
    dust_number: float = 0.0
    clamp_mass: float = 0.0
    clamp_number: float = 0.0

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        g.flags.writeable = False
        object.__setattr__(self, "g", g)

    def replace(self, **changes) -> "DensityState":
        """Copy with some fields changed."""
        return replace(self, **changes)

    def numbers(self, grid: Grid) -> np.ndarray:
        """Particle number per cell."""
        return self.g * grid.widths

    def ledger(self) -> dict:
        """Ledger fields by name."""
        return {
            "gel_mass": self.gel_mass,
            "dust_mass": self.dust_mass,
            "dust_number": self.dust_number,
            "clamp_mass": self.clamp_mass,
            "clamp_number": self.clamp_number,
        }


def moment(state: Union[DensityState, np.ndarray], grid: Grid, p: float) -> float:
    """
    Exact moment ``integral of m^p g(m) dm`` of a piecewise-constant density.

    :param state: A state or a bare array of cell densities.
    :param grid: The grid the density lives on.
    :param p: Real exponent.
    :rtype: float
    :raises CMFEGridError: If the density does not match the grid or is not finite.
    """
    g = state.g if isinstance(state, DensityState) else np.asarray(state, dtype=float)
    if g.shape != (grid.size,):
        raise CMFEGridError(f"Density has {g.size} cells, grid has {grid.size}")
    if not np.all(np.isfinite(g)):
        raise CMFEGridError("Density contains non-finite values")
    return float(np.dot(g, grid.power_integrals(p)))
