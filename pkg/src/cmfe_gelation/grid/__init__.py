"""Mass grid, density state, initial data and moments."""

from cmfe_gelation.grid.exceptions import (
    CMFEGridError,
    CMFEGridException,
    CMFEInitialDataError,
)
from cmfe_gelation.grid.grid import Grid, build_grid
from cmfe_gelation.grid.initial import (
    ExponentialData,
    InitialDataSpec,
    MonodisperseData,
    PowerCutoffData,
    ShiftedData,
    TableData,
    init_density,
    initial_data_from_dict,
)
from cmfe_gelation.grid.state import DensityState, moment

__all__ = [
    "CMFEGridError",
    "CMFEGridException",
    "CMFEInitialDataError",
    "DensityState",
    "ExponentialData",
    "Grid",
    "InitialDataSpec",
    "MonodisperseData",
    "PowerCutoffData",
    "ShiftedData",
    "TableData",
    "build_grid",
    "init_density",
    "initial_data_from_dict",
    "moment",
]
