"""
Mass partitions.

A :class:`Grid` is an immutable partition of ``[edges[0], edges[-1]]`` into cells.
Each cell carries two representative masses:

* ``pivots`` - where rates are evaluated and snapshots are reported,
  the geometric mean of the cell edges unless given explicitly;
* ``mean_masses`` - the mean mass of a constant density on the cell,
  used by every mass-conserving assignment.
"""

import hashlib
import math
from logging import getLogger
from typing import Dict, Optional

import numpy as np
from cached_property import cached_property

from cmfe_gelation.grid.exceptions import CMFEGridError
from cmfe_gelation.validation import validate_positive

LOG = getLogger(__name__)

GEOMETRIC_RTOL = 1e-12


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.flags.writeable = False
    return values


class Grid:
    """
    Partition of the mass axis.

    :param edges: Strictly increasing positive cell edges, one more than cells.
    :param pivots: Optional per-cell rate evaluation masses, strictly inside their cells.
        Geometric means of the edges by default.
    :param coag_min: Lower mass cutoff for coagulation. Cells whose pivot is below it
        do not coagulate. ``edges[0]`` by default.
    :raises CMFEGridError: If the edges, pivots or cutoff are inconsistent.
    """

    def __init__(self, edges, pivots=None, coag_min: Optional[float] = None):
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise CMFEGridError(f"Need at least two edges, got {edges.size}")
        if not np.all(np.isfinite(edges)) or edges[0] <= 0:
            raise CMFEGridError(f"Edges must be finite and positive, got first edge {edges[0]}")
        if np.any(np.diff(edges) <= 0):
            raise CMFEGridError("Edges must be strictly increasing")
        self._edges = _frozen(edges)

        if pivots is None:
            pivots = np.sqrt(edges[:-1] * edges[1:])
        pivots = np.asarray(pivots, dtype=float)
        if pivots.shape != (edges.size - 1,):
            raise CMFEGridError(f"Expected {edges.size - 1} pivots, got {pivots.size}")
        if np.any(pivots <= edges[:-1]) or np.any(pivots >= edges[1:]):
            raise CMFEGridError("Pivots must lie strictly inside their cells")
        self._pivots = _frozen(pivots)

        coag_min = float(edges[0]) if coag_min is None else validate_positive("coag_min", coag_min, CMFEGridError)
        if not edges[0] <= coag_min <= edges[-1]:
            raise CMFEGridError(f"coag_min {coag_min} is outside the grid [{edges[0]}, {edges[-1]}]")
        self._coag_min = coag_min
        self._power_integrals: Dict[float, np.ndarray] = {}

    def __repr__(self):
        return (
            f"Grid(cells={self.size}, range=[{self.bottom_edge:.6g}, {self.top_edge:.6g}], "
            f"coag_min={self.coag_min:.6g})"
        )

    def __len__(self):
        return self.size

    @classmethod
    def from_edges(cls, edges, pivots=None, coag_min: Optional[float] = None) -> "Grid":
        """Grid on arbitrary (not necessarily geometric) edges."""
        return cls(edges, pivots=pivots, coag_min=coag_min)

    @property
    def edges(self) -> np.ndarray:
        """Cell edges."""
        return self._edges

    @property
    def pivots(self) -> np.ndarray:
        """Rate evaluation masses."""
        return self._pivots

    @property
    def coag_min(self) -> float:
        """Coagulation cutoff."""
        return self._coag_min

    @property
    def size(self) -> int:
        """Number of cells."""
        return self._edges.size - 1

    @property
    def bottom_edge(self) -> float:
        """Smallest mass on the grid."""
        return float(self._edges[0])

    @property
    def top_edge(self) -> float:
        """Largest mass on the grid, the truncation mass."""
        return float(self._edges[-1])

    @cached_property
    def widths(self) -> np.ndarray:
        """Cell widths."""
        return _frozen(np.diff(self._edges))

    @cached_property
    def mean_masses(self) -> np.ndarray:
        """Mean mass of a constant density on each cell."""
        return _frozen(0.5 * (self._edges[:-1] + self._edges[1:]))

    @cached_property
    def coagulating(self) -> np.ndarray:
        """Mask of the cells taking part in coagulation."""
        mask = self._pivots >= self._coag_min
        mask.flags.writeable = False
        return mask

    @cached_property
    def is_geometric(self) -> bool:
        """True if the edge ratio is constant."""
        ratios = self._edges[1:] / self._edges[:-1]
        return bool(np.all(np.abs(ratios / ratios[0] - 1.0) <= GEOMETRIC_RTOL))

    @cached_property
    def cells_per_decade(self) -> float:
        """Cell density in cells per factor of ten."""
        return self.size / math.log10(self.top_edge / self.bottom_edge)

    def power_integrals(self, p: float) -> np.ndarray:
        """
        Per-cell integrals of ``m^p`` over each cell.

        :param p: Real exponent. ``-1`` gives the log of the edge ratio.
        :type p: float
        :rtype: numpy.ndarray
        """
        p = float(p)
        if not math.isfinite(p):
            raise CMFEGridError(f"Moment exponent must be finite, got {p}")
        if p not in self._power_integrals:
            low, high = self._edges[:-1], self._edges[1:]
            if p == -1.0:
                values = np.log(high / low)
            elif p == 0.0:
                values = np.array(self.widths)
            else:
                values = (high ** (p + 1.0) - low ** (p + 1.0)) / (p + 1.0)
            self._power_integrals[p] = _frozen(values)
        return self._power_integrals[p]

    def locate(self, mass: float) -> int:
        """
        Index of the cell holding ``mass``. Cells are closed on the left, the
        last one is closed on both sides.

        :raises CMFEGridError: If the mass is off the grid.
        """
        if not self.bottom_edge <= mass <= self.top_edge:
            raise CMFEGridError(f"Mass {mass} is outside the grid [{self.bottom_edge}, {self.top_edge}]")
        return min(int(np.searchsorted(self._edges, mass, side="right")) - 1, self.size - 1)

    def fingerprint(self) -> str:
        """SHA-256 of the edges, pivots and cutoff."""
        digest = hashlib.sha256()
        digest.update(self._edges.tobytes())
        digest.update(self._pivots.tobytes())
        digest.update(np.float64(self._coag_min).tobytes())
        return digest.hexdigest()

    def summary(self) -> dict:
        """Short description for manifests and metadata."""
        return {
            "cells": self.size,
            "bottom_edge": self.bottom_edge,
            "top_edge": self.top_edge,
            "coag_min": self.coag_min,
            "geometric": self.is_geometric,
            "cells_per_decade": self.cells_per_decade,
        }


def build_grid(m_min: float, m_max: float, cells_per_decade: float, coag_min: Optional[float] = None) -> Grid:
    """
    Geometric grid on ``[m_min, m_max]``.

    The cell count is ``ceil(cells_per_decade * log10(m_max / m_min))`` and the
    pivots are the geometric means of the edges.

    :param m_min: Bottom edge.
    :param m_max: Top edge, the truncation mass.
    :param cells_per_decade: Cells per factor of ten, at least one.
    :param coag_min: Coagulation cutoff, ``m_min`` by default.
    :rtype: Grid
    :raises CMFEGridError: On inverted bounds or a nonsensical resolution.
    """
    m_min = validate_positive("m_min", m_min, CMFEGridError)
    m_max = validate_positive("m_max", m_max, CMFEGridError)
    if m_min >= m_max:
        raise CMFEGridError(f"m_min {m_min} must be below m_max {m_max}")
    cells_per_decade = validate_positive("cells_per_decade", cells_per_decade, CMFEGridError)
    if cells_per_decade < 1:
        raise CMFEGridError(f"cells_per_decade must be at least 1, got {cells_per_decade}")

    # 1e-9 keeps an exact number of decades from rounding up to an extra cell
    cells = max(1, math.ceil(cells_per_decade * math.log10(m_max / m_min) - 1e-9))
    edges = m_min * (m_max / m_min) ** (np.arange(cells + 1) / cells)
    edges[0], edges[-1] = m_min, m_max

    grid = Grid(edges, coag_min=m_min if coag_min is None else coag_min)
    if not grid.is_geometric:
        raise CMFEGridError(f"Edges on [{m_min}, {m_max}] are not geometric to {GEOMETRIC_RTOL}")
    LOG.debug("Built %r", grid)
    return grid
