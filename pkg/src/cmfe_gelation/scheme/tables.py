"""
Precomputed pair and breakup tables of the sectional scheme.

Coagulation uses a fixed-pivot assignment on the cell mean masses: the
mass ``v = c_i + c_j`` of a newborn particle is split between the two
bracketing mean masses so that number and mass are both conserved.
Sums above the top mean mass but not above the top edge go to the top
cell and the excess mass goes to gel. Sums above the top edge go to gel
entirely.

Fragmentation uses exact integrals of the breakage function over cells
below the parent cell, exact integrals below the bottom edge for dust,
and a mass-conserving remainder in the parent cell.
"""

from dataclasses import dataclass
from logging import getLogger

import numpy as np

from cmfe_gelation.grid import Grid
from cmfe_gelation.kernels import KernelModel, coag_rate, selection_rate
from cmfe_gelation.kernels.breakage import _mass_in, _number_in

LOG = getLogger(__name__)


@dataclass(frozen=True)
class CoagTable:  # pylint: disable=too-many-instance-attributes
    """
    Pair table, all arrays ``(cells, cells)`` indexed by reactant cells.

    ``rate`` is zero for pairs with a reactant below the coagulation cutoff.
    ``lo``/``hi`` are target cells with number fractions ``f_lo``/``f_hi``.
    ``gel_mass`` is the mass booked to gel per reaction and ``overflow``
    marks pairs whose whole mass leaves the grid.
    """

    rate: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    f_lo: np.ndarray
    f_hi: np.ndarray
    gel_mass: np.ndarray
    overflow: np.ndarray

    @property
    def size(self) -> int:
        """Number of cells."""
        return self.rate.shape[0]

    def target(self, i: int, j: int) -> tuple:
        """
        Describe where the product of cells ``i`` and ``j`` goes.

        :return: ``("split", lo, hi, f_lo, f_hi, gel_mass)`` or ``("overflow", gel_mass)``.
        """
        if self.overflow[i, j]:
            return "overflow", float(self.gel_mass[i, j])
        return (
            "split",
            int(self.lo[i, j]),
            int(self.hi[i, j]),
            float(self.f_lo[i, j]),
            float(self.f_hi[i, j]),
            float(self.gel_mass[i, j]),
        )


@dataclass(frozen=True)
class FragTable:
    """
    Breakup table.

    ``selection[j]`` is the selection rate of cell ``j``. ``redistribution[i, j]``
    is the number of fragments cell ``i`` receives per breakup in cell ``j``.
    ``dust_number[j]`` and ``dust_mass[j]`` are the fragments below the bottom edge.
    """

    selection: np.ndarray
    redistribution: np.ndarray
    dust_number: np.ndarray
    dust_mass: np.ndarray

    @property
    def active(self) -> bool:
        """True if any cell breaks up."""
        return bool(np.any(self.selection > 0))


def precompute_coag_table(grid: Grid, model: KernelModel) -> CoagTable:
    """
    Build the coagulation pair table.

    :param grid: Mass grid.
    :param model: Rate-law parameters.
    :rtype: CoagTable
    """
    cells = grid.size
    c = grid.mean_masses
    x = grid.pivots

    rate = np.asarray(coag_rate(x[:, None], x[None, :], model), dtype=float)
    rate = 0.5 * (rate + rate.T)
    rate = np.where(grid.coagulating[:, None] & grid.coagulating[None, :], rate, 0.0)

    v = c[:, None] + c[None, :]
    index = np.searchsorted(c, v, side="left")
    inside = index < cells
    overflow = v > grid.top_edge
    top_region = ~inside & ~overflow

    hi = np.where(inside, index, cells - 1)
    lo = np.where(inside, index - 1, cells - 1)
    span = np.where(inside, c[hi] - c[lo], 1.0)
    f_lo = np.where(inside, (c[hi] - v) / span, np.where(top_region, 1.0, 0.0))
    f_hi = np.where(inside, 1.0 - f_lo, 0.0)
    gel_mass = np.where(overflow, v, np.where(top_region, v - c[-1], 0.0))

    LOG.debug(
        "Coagulation table: %d cells, %d active pairs, %d overflow pairs",
        cells,
        int(np.count_nonzero(rate)),
        int(np.count_nonzero(overflow & (rate > 0))),
    )
    return CoagTable(rate=rate, lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi, gel_mass=gel_mass, overflow=overflow)


def precompute_frag_table(grid: Grid, model: KernelModel) -> FragTable:
    """
    Build the breakup table.

    Cells below the parent cell receive the exact fragment count on the cell.
    The parent cell receives whatever keeps the breakup mass conserving. If
    that would be negative (very coarse grids) the lower-cell counts are scaled
    down so the parent cell receives nothing.

    :param grid: Mass grid.
    :param model: Rate-law parameters.
    :rtype: FragTable
    """
    cells = grid.size
    c = grid.mean_masses
    edges = grid.edges
    gamma = model.gamma

    selection = np.asarray(selection_rate(grid.pivots, model), dtype=float).reshape(cells)
    below = np.triu(np.ones((cells, cells), dtype=bool), k=1)
    redistribution = np.where(below, _number_in(edges[:-1, None], edges[1:, None], c[None, :], gamma), 0.0)

    dust_number = _number_in(0.0, edges[0], c, gamma)
    dust_mass = _mass_in(0.0, edges[0], c, gamma)

    lower_mass = (redistribution * c[:, None]).sum(axis=0)
    own_mass = c - dust_mass - lower_mass
    short = own_mass < 0
    if np.any(short):
        LOG.warning("Grid too coarse for %d parent cells, scaling their lower fragments", int(np.count_nonzero(short)))
        redistribution[:, short] *= (c - dust_mass)[short] / lower_mass[short]
        own_mass[short] = 0.0
    redistribution[np.arange(cells), np.arange(cells)] = own_mass / c

    return FragTable(
        selection=selection,
        redistribution=redistribution,
        dust_number=np.asarray(dust_number, dtype=float),
        dust_mass=np.asarray(dust_mass, dtype=float),
    )
