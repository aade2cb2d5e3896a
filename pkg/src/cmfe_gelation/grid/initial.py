"""
Initial data families and their placement on a grid.

Every family knows how many particles it holds on a mass interval
(``number_in``). Cell averages follow from that, which makes the
discretized data exact in number for every family.
"""

import abc
from dataclasses import dataclass
from logging import getLogger
from typing import Mapping, Tuple

import numpy as np

from cmfe_gelation.grid.exceptions import CMFEInitialDataError
from cmfe_gelation.grid.grid import Grid
from cmfe_gelation.grid.state import DensityState
from cmfe_gelation.validation import validate_finite, validate_nonnegative, validate_positive

LOG = getLogger(__name__)


class InitialDataSpec(abc.ABC):
    """Base class of the initial data families."""

    kind: str = ""

    @abc.abstractmethod
    def number_in(self, low, high) -> np.ndarray:
        """Particles with mass in ``[low, high)``, vectorized. Empty intervals hold zero."""

    @abc.abstractmethod
    def to_dict(self) -> dict:
        """Plain representation for configs and manifests."""

    def cell_numbers(self, grid: Grid) -> np.ndarray:
        """Particles per cell of ``grid``."""
        return np.asarray(self.number_in(grid.edges[:-1], grid.edges[1:]), dtype=float)


def _interval(low, high):
    low = np.asarray(low, dtype=float)
    high = np.asarray(high, dtype=float)
    return low, np.maximum(high, low)


@dataclass(frozen=True)
class ExponentialData(InitialDataSpec):
    """``amplitude * exp(-m / scale)``."""

    amplitude: float = 1.0
    scale: float = 1.0
    kind = "exponential"

    def __post_init__(self):
        validate_nonnegative("amplitude", self.amplitude, CMFEInitialDataError)
        validate_positive("scale", self.scale, CMFEInitialDataError)

    def number_in(self, low, high):
        low, high = _interval(low, high)
        return self.amplitude * self.scale * np.exp(-low / self.scale) * -np.expm1(-(high - low) / self.scale)

    def to_dict(self):
        return {"kind": self.kind, "amplitude": self.amplitude, "scale": self.scale}


@dataclass(frozen=True)
class MonodisperseData(InitialDataSpec):
    """``number`` particles of one ``mass``, smeared over the cell holding it."""

    mass: float = 1.0
    number: float = 1.0
    kind = "monodisperse"

    def __post_init__(self):
        validate_positive("mass", self.mass, CMFEInitialDataError)
        validate_nonnegative("number", self.number, CMFEInitialDataError)

    def number_in(self, low, high):
        low, high = _interval(low, high)
        return np.where((low <= self.mass) & (self.mass < high), self.number, 0.0)

    def cell_numbers(self, grid):
        if not grid.bottom_edge <= self.mass <= grid.top_edge:
            raise CMFEInitialDataError(
                f"Monodisperse mass {self.mass} is outside the grid [{grid.bottom_edge}, {grid.top_edge}]"
            )
        numbers = np.zeros(grid.size)
        numbers[grid.locate(self.mass)] = self.number
        return numbers

    def to_dict(self):
        return {"kind": self.kind, "mass": self.mass, "number": self.number}


@dataclass(frozen=True)
class PowerCutoffData(InitialDataSpec):
    """``amplitude * m^exponent`` on ``[m_min, m_max]``, zero elsewhere."""

    exponent: float
    m_min: float
    m_max: float
    amplitude: float = 1.0
    kind = "power-cutoff"

    def __post_init__(self):
        validate_finite("exponent", self.exponent, CMFEInitialDataError)
        validate_positive("m_min", self.m_min, CMFEInitialDataError)
        validate_positive("m_max", self.m_max, CMFEInitialDataError)
        validate_nonnegative("amplitude", self.amplitude, CMFEInitialDataError)
        if self.m_min >= self.m_max:
            raise CMFEInitialDataError(f"m_min {self.m_min} must be below m_max {self.m_max}")

    def number_in(self, low, high):
        low, high = _interval(low, high)
        low = np.clip(low, self.m_min, self.m_max)
        high = np.clip(high, self.m_min, self.m_max)
        if self.exponent == -1.0:
            return self.amplitude * np.log(high / low)
        power = self.exponent + 1.0
        return self.amplitude * (high**power - low**power) / power

    def to_dict(self):
        return {
            "kind": self.kind,
            "exponent": self.exponent,
            "m_min": self.m_min,
            "m_max": self.m_max,
            "amplitude": self.amplitude,
        }


@dataclass(frozen=True)
class ShiftedData(InitialDataSpec):
    """``inner`` restricted to masses at or above ``delta``."""

    delta: float
    inner: InitialDataSpec
    kind = "shifted"

    def __post_init__(self):
        validate_positive("delta", self.delta, CMFEInitialDataError)
        if not isinstance(self.inner, InitialDataSpec):
            raise CMFEInitialDataError(f"shifted data needs an inner spec, got {type(self.inner).__name__}")

    def number_in(self, low, high):
        low, high = _interval(low, high)
        return self.inner.number_in(np.maximum(low, self.delta), np.maximum(high, self.delta))

    def cell_numbers(self, grid):
        inner = self.inner.cell_numbers(grid)
        if isinstance(self.inner, MonodisperseData):
            return inner if self.inner.mass >= self.delta else np.zeros(grid.size)
        return super().cell_numbers(grid)

    def to_dict(self):
        return {"kind": self.kind, "delta": self.delta, "inner": self.inner.to_dict()}


@dataclass(frozen=True)
class TableData(InitialDataSpec):
    """Density tabulated at strictly increasing masses, linear in between, zero outside."""

    masses: Tuple[float, ...]
    densities: Tuple[float, ...]
    source: str = ""
    kind = "table"

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float)
        densities = np.asarray(self.densities, dtype=float)
        if masses.ndim != 1 or masses.shape != densities.shape or masses.size < 2:
            raise CMFEInitialDataError("table needs at least two (mass, density) rows")
        if not (np.all(np.isfinite(masses)) and np.all(np.isfinite(densities))):
            raise CMFEInitialDataError("table values must be finite")
        if np.any(masses <= 0) or np.any(np.diff(masses) <= 0):
            raise CMFEInitialDataError("table masses must be positive and strictly increasing")
        if np.any(densities < 0):
            raise CMFEInitialDataError(f"table densities must be nonnegative, got {densities[densities < 0]}")
        object.__setattr__(self, "masses", tuple(masses.tolist()))
        object.__setattr__(self, "densities", tuple(densities.tolist()))

    def _cumulative(self, x):
        masses = np.asarray(self.masses)
        densities = np.asarray(self.densities)
        slopes = np.diff(densities) / np.diff(masses)
        segments = np.concatenate(([0.0], np.cumsum(0.5 * (densities[1:] + densities[:-1]) * np.diff(masses))))

        x = np.clip(np.asarray(x, dtype=float), masses[0], masses[-1])
        index = np.clip(np.searchsorted(masses, x, side="right") - 1, 0, masses.size - 2)
        offset = x - masses[index]
        return segments[index] + densities[index] * offset + 0.5 * slopes[index] * offset**2

    def number_in(self, low, high):
        low, high = _interval(low, high)
        return self._cumulative(high) - self._cumulative(low)

    def cell_numbers(self, grid):
        masses = np.asarray(self.masses)
        offenders = masses[(masses < grid.bottom_edge) | (masses > grid.top_edge)]
        if offenders.size:
            raise CMFEInitialDataError(
                f"Table masses outside the grid [{grid.bottom_edge}, {grid.top_edge}]: "
                + ", ".join(f"{mass:.17g}" for mass in offenders)
            )
        return np.maximum(super().cell_numbers(grid), 0.0)

    def to_dict(self):
        if self.source:
            return {"kind": self.kind, "path": self.source}
        return {"kind": self.kind, "masses": list(self.masses), "densities": list(self.densities)}

    @classmethod
    def from_csv(cls, path: str) -> "TableData":
        """
        Read a two-column ``mass,density`` CSV file. The header row is optional.

        :raises CMFEInitialDataError: If the file is not a two-column numeric table.
        """
        with open(path, encoding="utf-8") as fp:
            first = fp.readline()
        try:
            [float(cell) for cell in first.split(",")]
            skip = 0
        except ValueError:
            skip = 1
        try:
            data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
        except ValueError as err:
            raise CMFEInitialDataError(f"{path}: not a numeric mass,density table: {err}") from err
        if data.shape[1] != 2:
            raise CMFEInitialDataError(f"{path}: expected 2 columns, got {data.shape[1]}")
        return cls(tuple(data[:, 0]), tuple(data[:, 1]), source=str(path))


def initial_data_from_dict(data: Mapping) -> InitialDataSpec:
    """
    Build an initial data spec from its plain representation, e.g. a config section.

    :raises CMFEInitialDataError: On an unknown kind or bad parameters.
    """
    data = dict(data)
    kind = data.pop("kind", None)
    try:
        if kind == "exponential":
            return ExponentialData(**data)
        if kind == "monodisperse":
            return MonodisperseData(**data)
        if kind == "power-cutoff":
            return PowerCutoffData(**data)
        if kind == "shifted":
            return ShiftedData(delta=data.pop("delta"), inner=initial_data_from_dict(data.pop("inner")), **data)
        if kind == "table":
            if "path" in data:
                return TableData.from_csv(data["path"])
            return TableData(tuple(data["masses"]), tuple(data["densities"]))
    except (TypeError, KeyError) as err:
        raise CMFEInitialDataError(f"Bad parameters for {kind} initial data: {err}") from err
    raise CMFEInitialDataError(f"Unknown initial data kind {kind!r}")


def init_density(grid: Grid, spec: InitialDataSpec) -> DensityState:
    """
    Cell averages of ``spec`` on ``grid`` at time zero with an empty ledger.

    :raises CMFEInitialDataError: If the data does not fit on the grid.
    """
    numbers = spec.cell_numbers(grid)
    g = numbers / grid.widths
    if not np.all(np.isfinite(g)) or np.any(g < 0):
        raise CMFEInitialDataError(f"{spec.kind} data gives a negative or non-finite density on {grid!r}")
    LOG.debug("Initial %s data: %d occupied cells", spec.kind, int(np.count_nonzero(g)))
    return DensityState(g)
