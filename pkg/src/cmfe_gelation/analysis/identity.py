"""
Discrete residual of the weak moment identity

    int Theta (g(t) - g(0)) = 1/2 int_0^t sum Theta~ C N N + int_0^t sum Pi_Theta S N

for ``Theta = 1`` and ``Theta = min(m, lambda*)``.

``Theta~(c_i, c_j)`` is ``Theta`` at the product minus ``Theta`` at both
reactants, where the product is placed the way the coagulation table places
it (split between the bracketing mean masses, kept at the top mean mass, or
lost to gel). ``Pi_Theta`` is the closed-form fragment integral at the parent
mean mass. Time integrals are trapezoidal over the records.
"""

from enum import Enum
from logging import getLogger
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from cmfe_gelation.analysis.exceptions import CMFEResidualError
from cmfe_gelation.integrator import SimulationResult
from cmfe_gelation.kernels.breakage import _mass_in, _number_in
from cmfe_gelation.scheme import CoagTable, FragTable, precompute_coag_table, precompute_frag_table

LOG = getLogger(__name__)

MIN_RECORDS = 3


class ThetaForm(Enum):
    """Test functions of the identity."""

    CONSTANT_ONE = "constant-one"
    MASS_CAPPED = "mass-capped"


def _theta_points(form: ThetaForm, masses: np.ndarray, cap: Optional[float]) -> np.ndarray:
    if form is ThetaForm.CONSTANT_ONE:
        return np.ones_like(masses)
    return np.minimum(masses, cap)


def _theta_cells(form: ThetaForm, edges: np.ndarray, cap: Optional[float]) -> np.ndarray:
    """Integral of Theta over each cell."""
    low, high = edges[:-1], edges[1:]
    if form is ThetaForm.CONSTANT_ONE:
        return high - low
    below_low, below_high = np.minimum(low, cap), np.minimum(high, cap)
    return 0.5 * (below_high**2 - below_low**2) + cap * (np.maximum(high, cap) - np.maximum(low, cap))


def _pair_weights(form: ThetaForm, table: CoagTable, masses: np.ndarray, cap: Optional[float]) -> np.ndarray:
    theta = _theta_points(form, masses, cap)
    product = np.where(table.overflow, 0.0, table.f_lo * theta[table.lo] + table.f_hi * theta[table.hi])
    return product - theta[:, None] - theta[None, :]


def _fragment_weights(
    form: ThetaForm, masses: np.ndarray, gamma: float, eta: float, cap: Optional[float]
) -> np.ndarray:
    if form is ThetaForm.CONSTANT_ONE:
        return np.full_like(masses, eta - 1.0)
    capped = np.minimum(masses, cap)
    return _mass_in(0.0, capped, masses, gamma) + cap * _number_in(capped, masses, masses, gamma) - capped


def moment_balance_residual(  # pylint: disable=too-many-arguments,too-many-locals
    result: SimulationResult,
    theta: ThetaForm = ThetaForm.CONSTANT_ONE,
    model=None,
    grid=None,
    *,
    lambda_star: Optional[float] = None,
    tables: Optional[Tuple[CoagTable, FragTable]] = None,
) -> np.ndarray:
    """
    Relative residual of the moment identity at every record.

    The left-hand side includes what left the grid through the bottom edge
    (dust number for ``Theta = 1``, dust mass for ``min(m, lambda*)``) and
    takes out what clamping added. The residual is ``|LHS - RHS|`` divided by
    ``max(|LHS|, N1(0))``.

    :param result: Trajectory with densities at every record.
    :param theta: Test function.
    :param model: Rate-law parameters, those of the run by default.
    :param grid: Mass grid, the one of the run by default.
    :param lambda_star: Cap of the mass-capped test function, at least the bottom edge.
    :param tables: Coagulation and breakup tables, rebuilt if not given.
    :return: One residual per record, zero at ``t = 0``.
    :raises CMFEResidualError: On fewer than three records or a missing or too small cap.
    """
    theta = ThetaForm(theta)
    model = result.model if model is None else model
    grid = result.grid if grid is None else grid
    if result.times.size < MIN_RECORDS:
        raise CMFEResidualError(f"Need at least {MIN_RECORDS} records, got {result.times.size}")
    if theta is ThetaForm.MASS_CAPPED:
        if lambda_star is None or not lambda_star >= grid.bottom_edge:
            raise CMFEResidualError(
                f"lambda_star must be at least the bottom edge {grid.bottom_edge}, got {lambda_star}"
            )
        lambda_star = float(lambda_star)

    coag_table, frag_table = tables if tables is not None else (None, None)
    if coag_table is None:
        coag_table = precompute_coag_table(grid, model)
    if frag_table is None:
        frag_table = precompute_frag_table(grid, model)

    masses = grid.mean_masses
    densities = result.densities
    numbers = densities * grid.widths

    gained = (densities - densities[0]) @ _theta_cells(theta, grid.edges, lambda_star)
    if theta is ThetaForm.CONSTANT_ONE:
        left_grid, clamped = result.ledger["dust_number"], result.ledger["clamp_number"]
    else:
        left_grid, clamped = result.ledger["dust_mass"], result.ledger["clamp_mass"]
    lhs = gained + left_grid - clamped

    weights = _pair_weights(theta, coag_table, masses, lambda_star) * coag_table.rate
    coag_rate = 0.5 * np.einsum("ki,ij,kj->k", numbers, weights, numbers)
    frag_weights = _fragment_weights(theta, masses, model.gamma, model.eta, lambda_star) * frag_table.selection
    frag_rate = numbers @ frag_weights
    rhs = cumulative_trapezoid(coag_rate + frag_rate, result.times, initial=0.0)

    scale = np.maximum(np.abs(lhs), result.n1_initial)
    scale = np.where(scale > 0, scale, 1.0)
    residual = np.abs(lhs - rhs) / scale
    LOG.debug("Moment identity (%s): max residual %.3g", theta.value, float(np.max(residual)))
    return residual
