"""
Right-hand side of the truncated coagulation and multiple fragmentation system.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from logging import getLogger
from typing import Optional

import numpy as np

from cmfe_gelation.grid import DensityState, Grid
from cmfe_gelation.kernels import KernelModel
from cmfe_gelation.scheme.exceptions import CMFETableMismatchError
from cmfe_gelation.scheme.tables import (
    CoagTable,
    FragTable,
    precompute_coag_table,
    precompute_frag_table,
)

LOG = getLogger(__name__)

# Rows per block of the pair sum. Fixed so the summation order does not depend on the worker count.
BLOCK_ROWS = 32


@dataclass(frozen=True)
class RhsBundle:
    """
    Time derivative of a state.

    ``loss`` is the death part of ``dgdt`` (nonnegative, per cell); the step
    size controller uses it as a stability limit.
    """

    dgdt: np.ndarray
    gel_mass_rate: float = 0.0
    dust_mass_rate: float = 0.0
    dust_number_rate: float = 0.0
    loss: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        if self.loss is None:
            object.__setattr__(self, "loss", np.zeros_like(self.dgdt))

    def __add__(self, other: "RhsBundle") -> "RhsBundle":
        return RhsBundle(
            dgdt=self.dgdt + other.dgdt,
            gel_mass_rate=self.gel_mass_rate + other.gel_mass_rate,
            dust_mass_rate=self.dust_mass_rate + other.dust_mass_rate,
            dust_number_rate=self.dust_number_rate + other.dust_number_rate,
            loss=self.loss + other.loss,
        )

    @classmethod
    def zeros(cls, cells: int) -> "RhsBundle":
        """Bundle of a system at rest."""
        return cls(dgdt=np.zeros(cells))

    @property
    def finite(self) -> bool:
        """True if every rate is finite."""
        return bool(
            np.all(np.isfinite(self.dgdt))
            and np.isfinite(self.gel_mass_rate)
            and np.isfinite(self.dust_mass_rate)
            and np.isfinite(self.dust_number_rate)
        )


class SectionalScheme:
    """
    Discrete right-hand side on one grid for one model.

    Tables are built lazily unless given. With ``workers > 1`` the coagulation
    pair sum runs on a thread pool; blocks are merged in index order, so the
    result is bitwise identical for any worker count.

    :param grid: Mass grid.
    :type grid: Grid
    :param model: Rate-law parameters.
    :type model: KernelModel
    :param coag_table: Prebuilt coagulation table.
    :param frag_table: Prebuilt breakup table.
    :param workers: Threads for the pair sum.
    :type workers: int
    """

    def __init__(  # pylint: disable=too-many-arguments,too-many-positional-arguments
        self,
        grid: Grid,
        model: KernelModel,
        coag_table: Optional[CoagTable] = None,
        frag_table: Optional[FragTable] = None,
        workers: int = 1,
    ):
        self._grid = grid
        self._model = model
        self._coag_table = coag_table
        self._frag_table = frag_table
        self._workers = max(1, int(workers))
        self._executor = None
        self._blocks = [slice(start, min(start + BLOCK_ROWS, grid.size)) for start in range(0, grid.size, BLOCK_ROWS)]

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def __call__(self, state: DensityState) -> RhsBundle:
        return self.rhs(state)

    @property
    def grid(self) -> Grid:
        """Mass grid."""
        return self._grid

    @property
    def model(self) -> KernelModel:
        """Rate-law parameters."""
        return self._model

    @property
    def workers(self) -> int:
        """Threads used by the pair sum."""
        return self._workers

    @property
    def coag_table(self) -> CoagTable:
        """Coagulation pair table."""
        if self._coag_table is None:
            self._coag_table = precompute_coag_table(self._grid, self._model)
        return self._coag_table

    @property
    def frag_table(self) -> FragTable:
        """Breakup table."""
        if self._frag_table is None:
            self._frag_table = precompute_frag_table(self._grid, self._model)
        return self._frag_table

    @property
    def _pool(self) -> ThreadPoolExecutor:
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="cmfe-rhs")
        return self._executor

    def close(self):
        """Stop the worker threads, if any."""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def _check(self, state: DensityState):
        if state.g.shape != (self._grid.size,):
            raise CMFETableMismatchError(f"State has {state.g.size} cells, scheme grid has {self._grid.size}")

    def coag(self, state: DensityState) -> RhsBundle:
        """Coagulation part of the right-hand side."""
        self._check(state)
        table = self.coag_table
        cells = self._grid.size
        numbers = state.numbers(self._grid)

        def block(rows):
            reactions = table.rate[rows] * numbers[rows, None] * numbers[None, :]
            half = 0.5 * reactions
            birth = np.bincount(table.lo[rows].ravel(), weights=(half * table.f_lo[rows]).ravel(), minlength=cells)
            birth += np.bincount(table.hi[rows].ravel(), weights=(half * table.f_hi[rows]).ravel(), minlength=cells)
            return reactions.sum(axis=1), birth, float(np.sum(half * table.gel_mass[rows]))

        if self._workers > 1 and len(self._blocks) > 1:
            partials = self._pool.map(block, self._blocks)
        else:
            partials = map(block, self._blocks)

        death = np.empty(cells)
        birth = np.zeros(cells)
        gel_rate = 0.0
        for rows, (block_death, block_birth, block_gel) in zip(self._blocks, partials):
            death[rows] = block_death
            birth += block_birth
            gel_rate += block_gel

        widths = self._grid.widths
        return RhsBundle(dgdt=(birth - death) / widths, gel_mass_rate=gel_rate, loss=death / widths)

    def frag(self, state: DensityState) -> RhsBundle:
        """Fragmentation part of the right-hand side."""
        self._check(state)
        table = self.frag_table
        if not table.active:
            return RhsBundle.zeros(self._grid.size)

        events = table.selection * state.numbers(self._grid)
        gained = (table.redistribution * events[None, :]).sum(axis=1)
        widths = self._grid.widths
        return RhsBundle(
            dgdt=(gained - events) / widths,
            dust_mass_rate=float(np.dot(table.dust_mass, events)),
            dust_number_rate=float(np.dot(table.dust_number, events)),
            loss=events / widths,
        )

    def rhs(self, state: DensityState) -> RhsBundle:
        """Full right-hand side."""
        return self.coag(state) + self.frag(state)


def coag_rhs(state: DensityState, grid: Grid, table: CoagTable) -> RhsBundle:
    """
    Coagulation part of the right-hand side.

    :raises CMFETableMismatchError: If the table was built for another grid size.
    """
    if table.size != grid.size:
        raise CMFETableMismatchError(f"Table has {table.size} cells, grid has {grid.size}")
    return SectionalScheme(grid, None, coag_table=table).coag(state)


def frag_rhs(state: DensityState, grid: Grid, model: KernelModel, table: Optional[FragTable] = None) -> RhsBundle:
    """Fragmentation part of the right-hand side."""
    return SectionalScheme(grid, model, frag_table=table).frag(state)


def rhs(  # pylint: disable=too-many-arguments,too-many-positional-arguments
    state: DensityState,
    grid: Grid,
    model: KernelModel,
    table: Optional[CoagTable] = None,
    frag_table: Optional[FragTable] = None,
    workers: int = 1,
) -> RhsBundle:
    """Sum of the coagulation and fragmentation parts."""
    with SectionalScheme(grid, model, coag_table=table, frag_table=frag_table, workers=workers) as scheme:
        return scheme.rhs(state)
