"""
Initial-data statistics and the a-priori constants of the uniform estimates.
"""

import math
from dataclasses import asdict, dataclass
from logging import getLogger
from typing import Optional, Union

from cmfe_gelation.analysis.exceptions import CMFEHypothesisError
from cmfe_gelation.grid import DensityState, Grid, moment
from cmfe_gelation.integrator import SimulationResult
from cmfe_gelation.kernels import KernelModel, validate_model
from cmfe_gelation.validation import validate_positive

LOG = getLogger(__name__)


@dataclass(frozen=True)
class InitialStats:
    """
    Moments of the initial data that enter the bounds.

    :param n0_in: Total number.
    :param n1_in: Total mass.
    :param q: ``N1 + N_{-2 sigma}``.
    :param i_p: Singular moment ``N_{-p}``, if requested.
    :param p: The exponent of ``i_p``.
    """

    n0_in: float
    n1_in: float
    q: float
    i_p: Optional[float] = None
    p: Optional[float] = None

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        return asdict(self)


def initial_stats(
    state: Union[DensityState, SimulationResult], grid: Grid, model: KernelModel, p: Optional[float] = None
) -> InitialStats:
    """
    Statistics of discretized initial data.

    Simulation and bounds share these numbers, so they are exact integrals of
    the piecewise-constant density, not of the continuous family.

    :param state: Initial state, or a result whose first record is used.
    :param grid: Grid of the state.
    :param model: Rate-law parameters, for ``sigma``.
    :param p: Exponent of the singular moment ``I_p``.
    :rtype: InitialStats
    """
    if not isinstance(state, DensityState):
        state = state.state_at(0)
    n0 = moment(state, grid, 0.0)
    n1 = moment(state, grid, 1.0)
    q = n1 + moment(state, grid, -2.0 * model.sigma)
    i_p = None if p is None else moment(state, grid, -float(p))
    return InitialStats(n0_in=n0, n1_in=n1, q=q, i_p=i_p, p=None if p is None else float(p))


@dataclass(frozen=True)
class AprioriReport:
    """
    Constants of the uniform moment estimates on ``[0, horizon]``.

    ``a`` bounds ``N_{-2 sigma} + N1``. ``a_dagger`` bounds the time-integrated
    collision integral between particles heavier than ``lambda_cut`` and
    ``a_dagger_total`` the one over all pairs.
    """

    horizon: float
    lambda_cut: float
    k2: float
    a1: float
    a: float
    a_dagger: float
    a_dagger_total: float

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        return asdict(self)


def apriori_estimates(  # pylint: disable=too-many-arguments,too-many-positional-arguments
    model: KernelModel, q: float, n1_in: float, horizon: float, lambda_cut: float, force: bool = False
) -> AprioriReport:
    """
    Evaluate the a-priori constants::

        A1 = (Q + k2 k3 phi(0) N1 T) exp(k2 k3 phi(0) T)
        A = A1 + 2 N1
        A_dagger = 2 N1 (2 / lambda_cut + k3 eta phi(lambda_cut) T)
        A_dagger_total = 2 (A + Q + (eta - 1) k3 phi(0) A T)

    :param model: Rate-law parameters.
    :param q: ``N1 + N_{-2 sigma}`` of the initial data.
    :param n1_in: Initial mass.
    :param horizon: ``T``.
    :param lambda_cut: Mass above which collisions are counted for ``A_dagger``.
    :param force: Evaluate even for an inadmissible model.
    :rtype: AprioriReport
    :raises CMFEHypothesisError: On an inadmissible model, ``lambda_cut <= 1`` or ``T <= 0``.
    """
    horizon = validate_positive("T", horizon, CMFEHypothesisError)
    lambda_cut = validate_positive("lambda_cut", lambda_cut, CMFEHypothesisError)
    if lambda_cut <= 1:
        raise CMFEHypothesisError(f"lambda_cut must exceed 1, got {lambda_cut}")
    report = validate_model(model)
    if not report.passed and not force:
        failed = ", ".join(result.condition for result in report.failures)
        raise CMFEHypothesisError(f"A-priori estimates need an admissible model, failing: {failed}")

    k3 = model.effective_k3
    phi0 = model.phi.at_zero
    k2 = model.k2
    rate = k2 * k3 * phi0 if k3 * phi0 > 0 else 0.0
    a1 = (q + rate * n1_in * horizon) * math.exp(rate * horizon) if rate else q
    a = a1 + 2.0 * n1_in
    a_dagger = 2.0 * n1_in * (2.0 / lambda_cut + k3 * model.eta * float(model.phi(lambda_cut)) * horizon)
    a_dagger_total = 2.0 * (a + q + (model.eta - 1.0) * k3 * phi0 * a * horizon)
    return AprioriReport(
        horizon=horizon,
        lambda_cut=lambda_cut,
        k2=k2,
        a1=a1,
        a=a,
        a_dagger=a_dagger,
        a_dagger_total=a_dagger_total,
    )
